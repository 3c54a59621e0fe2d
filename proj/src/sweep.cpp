#include "iaswipt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iaswipt {

void SweepSpec::validate() const {
  if (snr_db.empty()) throw std::invalid_argument("SNR grid is empty");
  if (fractions.empty()) throw std::invalid_argument("fraction grid is empty");
  for (double s : snr_db)
    if (!std::isfinite(s)) throw std::invalid_argument("SNR grid contains a non-finite value");
  for (double f : fractions)
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("fractions must lie in (0, 1)");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise power must be positive");
  topology.validate();
  iaswipt::validate(scenario);
}

SweepRow make_row(Protocol kind, double snr_db, const CsiScenario& scenario, double fraction,
                  const ErgodicResult& r, std::uint64_t seed) {
  SweepRow row;
  row.protocol = kind;
  row.snr_db = snr_db;
  row.scenario = scenario;
  (kind == Protocol::Tsr ? row.alpha : row.rho) = fraction;
  row.c_d_mean = r.c_d.mean;
  row.c_d_stderr = r.c_d.std_error;
  row.c_p1_mean = r.c_p[0].mean;
  row.c_p1_stderr = r.c_p[0].std_error;
  row.c_p2_mean = r.c_p[1].mean;
  row.c_p2_stderr = r.c_p[1].std_error;
  row.trials = r.c_d.trials;
  row.seed = seed;
  return row;
}

SweepResult sweep(const SweepSpec& spec, const ExecutionOptions& exec) {
  spec.validate();
  SweepResult out;
  out.rows.reserve(spec.snr_db.size() * spec.fractions.size());
  for (double snr : spec.snr_db) {
    const PowerConfig powers = PowerConfig::from_snr_db(snr, spec.noise_power);
    const double lambda = error_variance(spec.scenario, powers.theta());
    // The gains do not depend on the fraction: one table per SNR point.
    const GainTable table = sample_gains(spec.topology, lambda, spec.trials, spec.seed, exec);
    out.resamples += table.resamples;
    for (double x : spec.fractions) {
      const ProtocolParams params{spec.kind, x, spec.eta};
      out.rows.push_back(
          make_row(spec.kind, snr, spec.scenario, x, evaluate_capacity(table, params, powers, spec.topology, exec),
                   spec.seed));
    }
  }
  return out;
}

int golden_iteration_bound(double width, double tolerance) {
  if (width <= tolerance) return 0;
  return static_cast<int>(std::ceil(std::log(width / tolerance) / std::log(kGoldenRatio)));
}

GoldenResult golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                     double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(lo < hi)) throw std::invalid_argument("empty search interval");
  const double inv = 1.0 / kGoldenRatio;
  double a = lo, b = hi;
  double c = b - (b - a) * inv;
  double d = a + (b - a) * inv;
  double fc = f(c), fd = f(d);
  GoldenResult r;
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv;
      fd = f(d);
    }
    ++r.iterations;
  }
  r.x = 0.5 * (a + b);
  r.value = f(r.x);
  return r;
}

std::vector<double> coarse_fraction_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
  return g;
}

bool is_unimodal(const std::vector<ProfilePoint>& p) {
  if (p.size() < 3) return true;
  const auto peak = static_cast<std::size_t>(
      std::max_element(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.y.value < b.y.value; }) -
      p.begin());
  auto slack = [&](std::size_t i, std::size_t j) { return 2.0 * std::max(p[i].y.std_error, p[j].y.std_error); };
  for (std::size_t i = 0; i < peak; ++i)
    if (p[i].y.value > p[i + 1].y.value + slack(i, i + 1)) return false;
  for (std::size_t i = peak + 1; i < p.size(); ++i)
    if (p[i].y.value > p[i - 1].y.value + slack(i, i - 1)) return false;
  return true;
}

FractionOptimum maximize_fraction(const std::function<ObjectiveValue(double)>& objective, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  FractionOptimum out;
  for (double x : coarse_fraction_grid()) out.coarse.push_back({x, objective(x)});

  const auto best = static_cast<std::size_t>(
      std::max_element(out.coarse.begin(), out.coarse.end(),
                       [](const auto& a, const auto& b) { return a.y.value < b.y.value; }) -
      out.coarse.begin());
  out.unimodal = is_unimodal(out.coarse);
  if (!out.unimodal) {
    std::ostringstream msg;
    msg << "coarse profile is not unimodal; refining around the global coarse maximum at x="
        << out.coarse[best].x;
    out.warning = msg.str();
  }

  const double lo = best == 0 ? kMinFraction : out.coarse[best - 1].x;
  const double hi = best + 1 == out.coarse.size() ? kMaxFraction : out.coarse[best + 1].x;
  const GoldenResult g = golden_section_maximize([&](double x) { return objective(x).value; }, lo, hi, tolerance);
  out.golden_iterations = g.iterations;

  if (g.value >= out.coarse[best].y.value) {
    out.x = g.x;
  } else {
    out.x = out.coarse[best].x;
  }
  out.value = objective(out.x);
  return out;
}

OptimizeResult optimize_fraction(const OptimizeSpec& spec, const ExecutionOptions& exec) {
  if (!(spec.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  spec.topology.validate();
  iaswipt::validate(spec.scenario);
  if (!(spec.eta > 0.0 && spec.eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
  if (spec.trials < 1) throw std::invalid_argument("trials must be at least 1");

  const PowerConfig powers = PowerConfig::from_snr_db(spec.snr_db, spec.noise_power);
  const double lambda = error_variance(spec.scenario, powers.theta());
  const GainTable table = sample_gains(spec.topology, lambda, spec.trials, spec.seed, exec);

  auto evaluate = [&](double x) {
    return evaluate_capacity(table, ProtocolParams{spec.kind, x, spec.eta}, powers, spec.topology, exec);
  };
  OptimizeResult out;
  out.optimum = maximize_fraction(
      [&](double x) {
        const auto r = evaluate(x);
        return ObjectiveValue{r.c_d.mean, r.c_d.std_error};
      },
      spec.tolerance);
  out.row = make_row(spec.kind, spec.snr_db, spec.scenario, out.optimum.x, evaluate(out.optimum.x), spec.seed);
  out.resamples = table.resamples;
  return out;
}

}  // namespace iaswipt
