// Interference-alignment precoders and zero-forcing combiners for both
// transmission periods.
//
// TP1 (source and primary transmitters active): the three interference spans
// at R_1, R_2 and R are aligned through the eigenvectors of the cascaded
// channel A = H_R1^-1 H_R2 (H12)^-1 H_1S H_2S^-1 H21, and each receiver nulls
// the single aligned interference subspace.
//
// TP2 (relay replaces the source): the relay precoder is free, so it is set to
// the dominant right singular vectors of H_DR; the primary precoders are then
// chosen so that the relay's interference at R_j lands on the same span as the
// other primary's interference.
#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "iaswipt/channel_model.hpp"

namespace iaswipt {

/// A matrix needed in an inverse is numerically singular. Callers resample.
class IllConditionedChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A null space or selected subspace has fewer dimensions than requested.
class DegenerateSubspace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxConditionNumber = 1e8;

struct Tp1Beamformers {
  CMatrix v1, v2, vs;  // precoders, N x f
  CMatrix u1, u2, ur;  // combiners, N x f
};

struct Tp2Beamformers {
  CMatrix v1, v2, vr;
  CMatrix u1, u2;
};

struct BeamformerSet {
  Tp1Beamformers tp1;
  Tp2Beamformers tp2;

  const CMatrix& precoder(int tx, int tp) const;
  const CMatrix& combiner(int rx, int tp) const;
};

/// Orthonormal basis of the null space of `m` (rows x N), with columns
/// phase-normalized so their first non-negligible entry is real positive.
/// Throws DegenerateSubspace if `m` has rank below its row count.
CMatrix null_space_basis(const CMatrix& m);

/// Rotates each column so its first entry with magnitude > 1e-9 is real and
/// positive.
void fix_column_phases(CMatrix& m);

/// Largest-to-smallest singular value ratio; infinite for singular input.
double condition_number(const CMatrix& m);

/// Throws IllConditionedChannel if cond(h) exceeds `max_condition`.
void require_invertible(const CMatrix& h, Link which, double max_condition = kMaxConditionNumber);

/// `streams` eigenvectors of a square matrix, ordered by descending
/// |eigenvalue| (ties: descending real, then imaginary part), each column
/// unit norm and phase-fixed. `values` receives the selected eigenvalues.
CMatrix dominant_eigenvectors(const CMatrix& a, int streams, std::vector<Complex>* values = nullptr);

/// Scales `v` so trace(v v^H) = 1.
CMatrix unit_trace(const CMatrix& v);

/// The alignment matrix A for TP1 from the given channels.
CMatrix alignment_matrix(const ChannelSet& h, double max_condition = kMaxConditionNumber);

/// Designs the TP1 beamformers from `h` (usually the estimated channels).
Tp1Beamformers design_tp1(const ChannelSet& h, int streams, double max_condition = kMaxConditionNumber);

/// Designs the TP2 beamformers from `h`.
Tp2Beamformers design_tp2(const ChannelSet& h, int streams, double max_condition = kMaxConditionNumber);

BeamformerSet design_beamformers(const ChannelSet& h, int streams, double max_condition = kMaxConditionNumber);

/// An interference product U^H H V at one receiver.
struct LeakageTerm {
  const char* receiver;
  const char* interferer;
  int tp;
  double power;           // ||U^H H V||_F^2
  double relative_power;  // power / ||H||_F^2
};

/// Two interference spans that the design forces to coincide.
struct AlignmentDefect {
  const char* receiver;
  int tp;
  double singular_ratio;  // sigma_{f+1} / sigma_1 of [H_a V_a | H_b V_b]
};

struct LeakageReport {
  std::vector<LeakageTerm> terms;
  std::vector<AlignmentDefect> alignment;

  double max_relative_power() const;
  double max_alignment_defect() const;
};

LeakageReport leakage(const BeamformerSet& bf, const ChannelSet& h);

/// ||U^H H_direct V_direct||_F^2 at the receivers that combine.
struct DirectGains {
  std::array<std::array<double, 2>, 2> primary{};  // [rx-1][tp-1]
  double relay = 0.0;

  double min() const;
};

DirectGains direct_gain(const BeamformerSet& bf, const ChannelSet& h);

}  // namespace iaswipt
