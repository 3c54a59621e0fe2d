#include "iaswipt/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>

#include <omp.h>

namespace iaswipt {

std::array<double, 2> primary_weights(const ProtocolParams& p) {
  if (p.kind == Protocol::Tsr) return {(1.0 + p.fraction) / 2.0, (1.0 - p.fraction) / 2.0};
  return {0.5, 0.5};
}

double capacity_destination(const ProtocolParams& p, double gamma_r, double gamma_d) {
  const double prelog = p.kind == Protocol::Tsr ? (1.0 - p.fraction) / 2.0 : 0.5;
  return prelog * std::log2(1.0 + std::min(gamma_r, gamma_d));
}

double capacity_primary(const ProtocolParams& p, double gamma_tp1, double gamma_tp2) {
  const auto w = primary_weights(p);
  return w[0] * std::log2(1.0 + gamma_tp1) + w[1] * std::log2(1.0 + gamma_tp2);
}

CapacitySample capacity_sample(const ProtocolParams& p, const SinrReport& s) {
  CapacitySample c;
  c.c_d = capacity_destination(p, s.gamma_r, s.gamma_d);
  for (int j = 0; j < 2; ++j) c.c_p[j] = capacity_primary(p, s.gamma_primary[j][0], s.gamma_primary[j][1]);
  return c;
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

CapacityEstimate estimate(std::span<const double> samples) {
  CapacityEstimate e;
  e.trials = samples.size();
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.mean = pairwise_sum(samples) / n;
  if (samples.size() > 1) {
    std::vector<double> sq(samples.size());
    std::transform(samples.begin(), samples.end(), sq.begin(), [&](double v) { return (v - e.mean) * (v - e.mean); });
    e.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return e;
}

Realization draw_realization(const Topology& topo, double lambda, std::uint64_t seed, std::uint64_t trial) {
  RandomStream rng(seed, trial);
  Realization r;
  for (int attempt = 0;; ++attempt) {
    if (attempt > kMaxConsecutiveResamples)
      throw ResamplingExhausted("trial " + std::to_string(trial) + ": more than " +
                                std::to_string(kMaxConsecutiveResamples) + " consecutive degenerate draws");
    r.channels = draw_channel_set(topo, rng);
    r.mismatched = apply_mismatch(r.channels, lambda, rng);
    try {
      r.beamformers = design_beamformers(r.mismatched.estimated, topo.streams, topo.max_condition_number);
      r.resamples = attempt;
      return r;
    } catch (const IllConditionedChannel&) {
    } catch (const DegenerateSubspace&) {
    }
  }
}

int resolve_threads(const ExecutionOptions& exec) {
  if (exec.threads > 0) return exec.threads;
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("IA_SWIPT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = static_cast<int>(std::min<long>(n, cap));
  }
  return std::max(n, 1);
}

namespace {

// Runs body(t) for t in [0, n) on `threads` workers; the first exception
// thrown by any iteration is rethrown after the loop.
template <typename Body>
void parallel_trials(std::size_t n, int threads, Body&& body) {
  std::exception_ptr error;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::int64_t t = 0; t < count; ++t) {
    try {
      body(static_cast<std::size_t>(t));
    } catch (...) {
#pragma omp critical(iaswipt_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

ErgodicResult reduce(const std::vector<CapacitySample>& samples, std::size_t resamples) {
  std::vector<double> col(samples.size());
  ErgodicResult r;
  r.resamples = resamples;
  auto column = [&](auto pick) {
    std::transform(samples.begin(), samples.end(), col.begin(), pick);
    return estimate(col);
  };
  r.c_d = column([](const CapacitySample& s) { return s.c_d; });
  r.c_p[0] = column([](const CapacitySample& s) { return s.c_p[0]; });
  r.c_p[1] = column([](const CapacitySample& s) { return s.c_p[1]; });
  return r;
}

}  // namespace

GainTable sample_gains(const Topology& topo, double lambda, std::size_t trials, std::uint64_t seed,
                       const ExecutionOptions& exec) {
  topo.validate();
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  GainTable table;
  table.gains.resize(trials);
  std::vector<int> resamples(trials, 0);
  parallel_trials(trials, resolve_threads(exec), [&](std::size_t t) {
    const Realization r = draw_realization(topo, lambda, seed, t);
    table.gains[t] = link_gains(r.channels, r.mismatched, r.beamformers);
    resamples[t] = r.resamples;
  });
  for (int c : resamples) table.resamples += static_cast<std::size_t>(c);
  return table;
}

ErgodicResult evaluate_capacity(const GainTable& table, const ProtocolParams& params, const PowerConfig& powers,
                                const Topology& topo, const ExecutionOptions& exec) {
  params.validate();
  powers.validate();
  std::vector<CapacitySample> samples(table.gains.size());
  parallel_trials(samples.size(), resolve_threads(exec), [&](std::size_t t) {
    samples[t] = capacity_sample(params, evaluate_sinrs(params, table.gains[t], powers, topo));
  });
  return reduce(samples, table.resamples);
}

void ErgodicConfig::validate() const {
  topology.validate();
  powers.validate();
  iaswipt::validate(scenario);
  params.validate();
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
}

ErgodicResult ergodic_capacity(const ErgodicConfig& cfg, const ExecutionOptions& exec) {
  cfg.validate();
  const double lambda = error_variance(cfg.scenario, cfg.powers.theta());
  const GainTable table = sample_gains(cfg.topology, lambda, cfg.trials, cfg.seed, exec);
  return evaluate_capacity(table, cfg.params, cfg.powers, cfg.topology, exec);
}

ErgodicResult ergodic_capacity_reference(const ErgodicConfig& cfg) {
  cfg.validate();
  const double lambda = error_variance(cfg.scenario, cfg.powers.theta());
  std::vector<CapacitySample> samples;
  samples.reserve(cfg.trials);
  std::size_t resamples = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const Realization r = draw_realization(cfg.topology, lambda, cfg.seed, t);
    resamples += static_cast<std::size_t>(r.resamples);
    const LinkGains g = link_gains(r.channels, r.mismatched, r.beamformers);
    samples.push_back(capacity_sample(cfg.params, evaluate_sinrs(cfg.params, g, cfg.powers, cfg.topology)));
  }
  // Plain running sums, independent of the pairwise reduction above.
  ErgodicResult out;
  out.resamples = resamples;
  auto column = [&](auto pick) {
    CapacityEstimate e;
    e.trials = samples.size();
    double sum = 0.0;
    for (const auto& s : samples) sum += pick(s);
    e.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
      double ss = 0.0;
      for (const auto& s : samples) ss += (pick(s) - e.mean) * (pick(s) - e.mean);
      const double n = static_cast<double>(samples.size());
      e.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return e;
  };
  out.c_d = column([](const CapacitySample& s) { return s.c_d; });
  out.c_p[0] = column([](const CapacitySample& s) { return s.c_p[0]; });
  out.c_p[1] = column([](const CapacitySample& s) { return s.c_p[1]; });
  return out;
}

}  // namespace iaswipt
