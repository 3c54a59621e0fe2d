// Parameter sweeps over SNR and harvesting fraction, and the search for the
// fraction that maximizes destination ergodic capacity.
//
// Every grid point reuses the same master seed (common random numbers). At a
// fixed SNR the Monte Carlo objective is therefore a deterministic, smooth
// function of the fraction, which makes a bracketing search meaningful.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iaswipt/capacity.hpp"

namespace iaswipt {

struct SweepSpec {
  Protocol kind = Protocol::Tsr;
  std::vector<double> snr_db;
  std::vector<double> fractions;  // alpha (TSR) or rho (PSR)
  CsiScenario scenario = PerfectCsi{};
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  Topology topology = Topology::uniform(2, 1, 3.0, 2.7);
  double eta = 0.8;
  double noise_power = 1.0;

  /// Rejects empty grids, fractions outside (0,1) and invalid settings.
  void validate() const;
};

/// One evaluated grid point; mirrors a CSV data row.
struct SweepRow {
  Protocol protocol = Protocol::Tsr;
  double snr_db = 0.0;
  CsiScenario scenario = PerfectCsi{};
  std::optional<double> alpha;
  std::optional<double> rho;
  double c_d_mean = 0.0, c_d_stderr = 0.0;
  double c_p1_mean = 0.0, c_p1_stderr = 0.0;
  double c_p2_mean = 0.0, c_p2_stderr = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  double fraction() const { return alpha ? *alpha : rho.value_or(0.0); }
  bool operator==(const SweepRow&) const = default;
};

SweepRow make_row(Protocol kind, double snr_db, const CsiScenario& scenario, double fraction,
                  const ErgodicResult& r, std::uint64_t seed);

struct SweepResult {
  std::vector<SweepRow> rows;  // SNR-major, fraction-minor
  std::size_t resamples = 0;
};

SweepResult sweep(const SweepSpec& spec, const ExecutionOptions& exec = {});

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

inline constexpr double kGoldenRatio = 1.6180339887498949;

/// Maximizes a unimodal `f` on [lo, hi] until the bracket is narrower than
/// `tolerance`. One new evaluation per iteration.
GoldenResult golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                     double tolerance);

/// Upper bound on golden_section_maximize iterations.
int golden_iteration_bound(double width, double tolerance);

struct ObjectiveValue {
  double value = 0.0;
  double std_error = 0.0;
};

struct ProfilePoint {
  double x = 0.0;
  ObjectiveValue y;
};

struct FractionOptimum {
  double x = 0.0;
  ObjectiveValue value;
  std::vector<ProfilePoint> coarse;
  bool unimodal = true;
  std::string warning;
  int golden_iterations = 0;
};

/// The 19-point grid 0.05, 0.10, ..., 0.95.
std::vector<double> coarse_fraction_grid();

inline constexpr double kMinFraction = 0.01;
inline constexpr double kMaxFraction = 0.99;

/// Whether `profile` rises to a single peak and falls after it, allowing each
/// adjacent step to go the wrong way by up to two standard errors.
bool is_unimodal(const std::vector<ProfilePoint>& profile);

/// Coarse grid, then golden-section refinement on the cells around the coarse
/// argmax. A non-unimodal coarse profile is reported in `warning` and the
/// global coarse argmax is refined anyway.
FractionOptimum maximize_fraction(const std::function<ObjectiveValue(double)>& objective, double tolerance);

struct OptimizeSpec {
  Protocol kind = Protocol::Tsr;
  double snr_db = 20.0;
  CsiScenario scenario = PerfectCsi{};
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  double tolerance = 1e-3;
  Topology topology = Topology::uniform(2, 1, 3.0, 2.7);
  double eta = 0.8;
  double noise_power = 1.0;
};

struct OptimizeResult {
  FractionOptimum optimum;
  SweepRow row;  // full estimate at the optimum
  std::size_t resamples = 0;
};

OptimizeResult optimize_fraction(const OptimizeSpec& spec, const ExecutionOptions& exec = {});

}  // namespace iaswipt
