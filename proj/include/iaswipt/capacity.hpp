// Instantaneous and ergodic capacity for the destination and the two primary
// receivers.
//
// Monte Carlo trials are independent: trial t draws everything from a
// substream keyed by (seed, t), so each trial's result is fixed before any
// scheduling decision. The parallel path fills a per-trial table with OpenMP
// and reduces it in index order; ergodic_capacity_reference() runs the same
// per-trial work in a plain serial loop and is kept for testing.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "iaswipt/beamforming.hpp"
#include "iaswipt/channel_model.hpp"
#include "iaswipt/eh_protocols.hpp"

namespace iaswipt {

/// More than kMaxConsecutiveResamples ill-conditioned draws in a row.
class ResamplingExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxConsecutiveResamples = 100;

struct CapacitySample {
  double c_d = 0.0;
  std::array<double, 2> c_p{};
};

/// Time-share weights of the two primary periods; they sum to one.
std::array<double, 2> primary_weights(const ProtocolParams& params);

/// DF capacity at D, bottlenecked by the weaker hop. Prelog (1-alpha)/2 for
/// TSR, 1/2 for PSR.
double capacity_destination(const ProtocolParams& params, double gamma_r, double gamma_d);

double capacity_primary(const ProtocolParams& params, double gamma_tp1, double gamma_tp2);

CapacitySample capacity_sample(const ProtocolParams& params, const SinrReport& sinr);

struct CapacityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Pairwise sum; the association order depends only on the length.
double pairwise_sum(std::span<const double> x);

/// Mean and standard error of the mean (unbiased variance); zero error for a
/// single sample.
CapacityEstimate estimate(std::span<const double> samples);

/// One fully designed realization.
struct Realization {
  ChannelSet channels;
  MismatchedChannels mismatched;
  BeamformerSet beamformers;
  int resamples = 0;
};

/// Draws channels and estimation errors from trial `trial`'s substream and
/// designs the beamformers on the estimates, redrawing (from the same
/// substream) while any required inverse is ill-conditioned.
Realization draw_realization(const Topology& topo, double lambda, std::uint64_t seed, std::uint64_t trial);

struct ExecutionOptions {
  int threads = 0;  // 0: IA_SWIPT_THREADS if set, else the OpenMP default
};

int resolve_threads(const ExecutionOptions& exec);

/// Per-trial link gains for one (topology, lambda, seed). Independent of the
/// protocol, its fraction and the transmit powers, so one table serves a whole
/// fraction sweep.
struct GainTable {
  std::vector<LinkGains> gains;
  std::size_t resamples = 0;
};

GainTable sample_gains(const Topology& topo, double lambda, std::size_t trials, std::uint64_t seed,
                       const ExecutionOptions& exec = {});

struct ErgodicResult {
  CapacityEstimate c_d;
  std::array<CapacityEstimate, 2> c_p;
  std::size_t resamples = 0;
};

ErgodicResult evaluate_capacity(const GainTable& table, const ProtocolParams& params, const PowerConfig& powers,
                                const Topology& topo, const ExecutionOptions& exec = {});

struct ErgodicConfig {
  Topology topology;
  PowerConfig powers;
  CsiScenario scenario = PerfectCsi{};
  ProtocolParams params;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;

  void validate() const;
};

ErgodicResult ergodic_capacity(const ErgodicConfig& cfg, const ExecutionOptions& exec = {});

/// Serial reference for ergodic_capacity().
ErgodicResult ergodic_capacity_reference(const ErgodicConfig& cfg);

}  // namespace iaswipt
