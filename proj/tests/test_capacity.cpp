#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "iaswipt/capacity.hpp"

using namespace iaswipt;

namespace {

ErgodicConfig small_config(ProtocolParams params, double snr_db, CsiScenario csi, std::size_t trials) {
  ErgodicConfig cfg;
  cfg.topology = Topology::uniform(2, 1, 3.0, 2.7);
  cfg.powers = PowerConfig::from_snr_db(snr_db);
  cfg.scenario = csi;
  cfg.params = params;
  cfg.trials = trials;
  cfg.seed = 31;
  return cfg;
}

void check_identical(const CapacityEstimate& a, const CapacityEstimate& b) {
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.trials == b.trials);
}

}  // namespace

TEST_CASE("destination capacity closed forms") {
  // (1 - 0.19) / 2 * log2(1 + min(3, 7))
  CHECK(capacity_destination(ProtocolParams::tsr(0.19), 3.0, 7.0) == doctest::Approx(0.81).epsilon(1e-15));
  CHECK(capacity_destination(ProtocolParams::psr(0.75), 7.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(capacity_destination(ProtocolParams::tsr(0.5), 0.0, 100.0) == 0.0);
  CHECK(capacity_destination(ProtocolParams::psr(0.5), 5.0, 0.0) == 0.0);
}

TEST_CASE("primary capacity weights") {
  const auto w = primary_weights(ProtocolParams::tsr(0.19));
  CHECK(w[0] == doctest::Approx(0.595).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(0.405).epsilon(1e-15));
  CHECK(w[0] + w[1] == doctest::Approx(1.0));
  const auto wp = primary_weights(ProtocolParams::psr(0.75));
  CHECK(wp[0] == 0.5);
  CHECK(wp[1] == 0.5);

  // Equal SINRs in both periods reduce to log2(1 + gamma).
  for (double g : {0.0, 0.3, 3.0, 1e4})
    for (auto p : {ProtocolParams::tsr(0.33), ProtocolParams::psr(0.6)})
      CHECK(capacity_primary(p, g, g) == doctest::Approx(std::log2(1.0 + g)).epsilon(1e-14));

  // Harvesting period of length alpha counts with the first period.
  ProtocolParams limit = ProtocolParams::tsr(0.5);
  limit.fraction = 0.0;
  CHECK(capacity_primary(limit, 3.0, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("estimate of constant samples") {
  const std::vector<double> xs(1000, 0.81);
  const CapacityEstimate e = estimate(xs);
  CHECK(e.mean == doctest::Approx(0.81).epsilon(1e-14));
  CHECK(e.std_error < 1e-15);
  CHECK(e.trials == 1000);

  const std::vector<double> one{2.5};
  CHECK(estimate(one).mean == 2.5);
  CHECK(estimate(one).std_error == 0.0);
  CHECK(estimate(std::vector<double>{}).trials == 0);
}

TEST_CASE("estimate matches the textbook formulas") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const CapacityEstimate e = estimate(xs);
  CHECK(e.mean == 2.5);
  // Sample variance 5/3; stderr sqrt(5/12).
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-15));
}

TEST_CASE("pairwise sum agrees with a long-double accumulation") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (std::size_t n : {0u, 1u, 7u, 9u, 1000u, 12345u}) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = u(gen);
    long double ref = 0.0L;
    for (double x : xs) ref += x;
    CHECK(std::abs(pairwise_sum(xs) - static_cast<double>(ref)) <= 1e-12 * std::max(1.0, static_cast<double>(ref)));
  }
}

TEST_CASE("results do not depend on the worker count") {
  for (auto params : {ProtocolParams::tsr(0.19), ProtocolParams::psr(0.75)}) {
    const ErgodicConfig cfg = small_config(params, 10.0, CsiMismatch{1.0, 10.0}, 3000);
    const ErgodicResult one = ergodic_capacity(cfg, {1});
    for (int threads : {2, 8}) {
      const ErgodicResult many = ergodic_capacity(cfg, {threads});
      check_identical(one.c_d, many.c_d);
      check_identical(one.c_p[0], many.c_p[0]);
      check_identical(one.c_p[1], many.c_p[1]);
      CHECK(one.resamples == many.resamples);
    }
  }
}

TEST_CASE("parallel path agrees with the serial reference") {
  for (auto params : {ProtocolParams::tsr(0.3), ProtocolParams::psr(0.6)}) {
    const ErgodicConfig cfg = small_config(params, 20.0, CsiMismatch{0.0, 0.001}, 2000);
    const ErgodicResult par = ergodic_capacity(cfg, {4});
    const ErgodicResult ref = ergodic_capacity_reference(cfg);
    CHECK(std::abs(par.c_d.mean - ref.c_d.mean) < 1e-12);
    CHECK(std::abs(par.c_d.std_error - ref.c_d.std_error) < 1e-12);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(par.c_p[j].mean - ref.c_p[j].mean) < 1e-12);
      CHECK(std::abs(par.c_p[j].std_error - ref.c_p[j].std_error) < 1e-12);
    }
    CHECK(par.resamples == ref.resamples);
  }
}

TEST_CASE("destination capacity respects its prelog bound") {
  const ErgodicConfig cfg = small_config(ProtocolParams::tsr(0.4), 20.0, PerfectCsi{}, 1);
  const double lambda = 0.0;
  const GainTable table = sample_gains(cfg.topology, lambda, 500, 3);
  for (const LinkGains& g : table.gains) {
    for (auto params : {ProtocolParams::tsr(0.4), ProtocolParams::psr(0.4)}) {
      const SinrReport s = evaluate_sinrs(params, g, cfg.powers, cfg.topology);
      const CapacitySample c = capacity_sample(params, s);
      const double prelog = params.kind == Protocol::Tsr ? 0.3 : 0.5;
      CHECK(c.c_d >= 0.0);
      CHECK(c.c_d <= prelog * std::log2(1.0 + s.gamma_r) + 1e-15);
      CHECK(c.c_d <= prelog * std::log2(1.0 + s.gamma_d) + 1e-15);
    }
  }
}

TEST_CASE("perfect-CSI ergodic capacity grows with SNR") {
  for (auto params : {ProtocolParams::tsr(0.19), ProtocolParams::psr(0.75)}) {
    double prev = -1.0;
    for (double snr = 0.0; snr <= 30.0; snr += 5.0) {
      const ErgodicResult r = ergodic_capacity(small_config(params, snr, PerfectCsi{}, 10000));
      CHECK(r.c_d.mean > prev);
      prev = r.c_d.mean;
    }
  }
}

TEST_CASE("degenerate draws are resampled and eventually give up") {
  ErgodicConfig cfg = small_config(ProtocolParams::tsr(0.19), 10.0, PerfectCsi{}, 50);
  const ErgodicResult ok = ergodic_capacity(cfg, {2});
  CHECK(std::isfinite(ok.c_d.mean));

  // A limit of 1 rejects every random channel.
  cfg.topology.max_condition_number = 1.0;
  CHECK_THROWS_AS(ergodic_capacity(cfg, {2}), ResamplingExhausted);
  CHECK_THROWS_AS(ergodic_capacity_reference(cfg), ResamplingExhausted);
}

TEST_CASE("a tight condition limit forces resamples but keeps determinism") {
  ErgodicConfig cfg = small_config(ProtocolParams::psr(0.5), 10.0, PerfectCsi{}, 400);
  cfg.topology.max_condition_number = 20.0;
  const ErgodicResult a = ergodic_capacity(cfg, {1});
  const ErgodicResult b = ergodic_capacity(cfg, {3});
  CHECK(a.resamples > 0);
  CHECK(a.resamples == b.resamples);
  check_identical(a.c_d, b.c_d);
}

TEST_CASE("invalid configurations are rejected") {
  ErgodicConfig cfg = small_config(ProtocolParams::tsr(0.19), 10.0, PerfectCsi{}, 10);
  cfg.trials = 0;
  CHECK_THROWS_AS(ergodic_capacity(cfg), std::invalid_argument);
  cfg.trials = 10;
  cfg.params.fraction = 1.0;
  CHECK_THROWS_AS(ergodic_capacity(cfg), std::invalid_argument);
  cfg.params.fraction = 0.19;
  cfg.scenario = CsiMismatch{1.0, -2.0};
  CHECK_THROWS_AS(ergodic_capacity(cfg), std::invalid_argument);
}
