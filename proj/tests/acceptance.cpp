// Acceptance suite. Runs every criterion (or the ones named on the command
// line) and prints one PASS/FAIL line each. Exit status 0 only if all pass.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "iaswipt/beamforming.hpp"
#include "iaswipt/capacity.hpp"
#include "iaswipt/csv_io.hpp"
#include "iaswipt/eh_protocols.hpp"
#include "iaswipt/sweep.hpp"

using namespace iaswipt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const Topology kTopo = Topology::uniform(2, 1, 3.0, 2.7);
const CsiMismatch kLowError{0.0, 0.001};
const CsiMismatch kDecaying{1.5, 15.0};
const CsiMismatch kDecayingSlow{1.0, 10.0};

ErgodicResult ergodic(ProtocolParams params, double snr_db, CsiScenario csi, std::size_t trials = 10000) {
  ErgodicConfig cfg;
  cfg.topology = kTopo;
  cfg.powers = PowerConfig::from_snr_db(snr_db);
  cfg.scenario = csi;
  cfg.params = params;
  cfg.trials = trials;
  cfg.seed = 1;
  return ergodic_capacity(cfg);
}

double combined(std::initializer_list<double> stderrs) {
  double s = 0.0;
  for (double e : stderrs) s += e * e;
  return std::sqrt(s);
}

// 1. IA exactness on random realizations with perfect CSI.
void ia_exactness(Outcome& o) {
  const auto t0 = Clock::now();
  double worst_leak = 0.0, worst_align = 0.0, weakest = std::numeric_limits<double>::infinity();
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const Realization r = draw_realization(kTopo, 0.0, 2024, t);
    const LeakageReport rep = leakage(r.beamformers, r.channels);
    worst_leak = std::max(worst_leak, rep.max_relative_power());
    worst_align = std::max(worst_align, rep.max_alignment_defect());
    weakest = std::min(weakest, direct_gain(r.beamformers, r.channels).min());
  }
  const double elapsed = seconds_since(t0);
  o.detail << "max leakage " << worst_leak << ", max alignment defect " << worst_align << ", min desired gain "
           << weakest << ", " << elapsed << " s";
  o.require(worst_leak < 1e-10, "leakage < 1e-10");
  o.require(worst_align < 1e-9, "alignment < 1e-9");
  o.require(weakest > 1e-9, "desired gain > 1e-9");
  o.require(elapsed < 5.0, "runtime < 5 s");
}

// 2. H = Hhat/(1+lambda) + Htilde, and the residual variance.
void csi_decomposition(Outcome& o) {
  double worst_identity = 0.0, worst_rel_var = 0.0;
  for (double lambda : {0.001, 0.015, 1.0}) {
    for (std::uint64_t t = 0; t < 1000; ++t) {
      RandomStream rng(5, t);
      const ChannelSet h = draw_channel_set(kTopo, rng);
      const MismatchedChannels m = apply_mismatch(h, lambda, rng);
      for (std::size_t i = 0; i < kLinkCount; ++i)
        worst_identity = std::max(
            worst_identity, (h.h[i] - m.estimated.h[i] / (1.0 + lambda) - m.residual.h[i]).cwiseAbs().maxCoeff());
    }
    constexpr int n = 10000;
    std::vector<std::array<Complex, 4 * kLinkCount>> res(n);
    for (int t = 0; t < n; ++t) {
      RandomStream rng(6, static_cast<std::uint64_t>(t));
      const ChannelSet h = draw_channel_set(kTopo, rng);
      const MismatchedChannels m = apply_mismatch(h, lambda, rng);
      for (std::size_t i = 0; i < kLinkCount; ++i)
        for (int e = 0; e < 4; ++e) res[static_cast<std::size_t>(t)][4 * i + static_cast<std::size_t>(e)] =
            m.residual.h[i](e / 2, e % 2);
    }
    const double target = lambda / (1.0 + lambda);
    for (std::size_t k = 0; k < 4 * kLinkCount; ++k) {
      Complex mean = 0.0;
      for (const auto& r : res) mean += r[k];
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (const auto& r : res) var += std::norm(r[k] - mean);
      var /= n - 1;
      worst_rel_var = std::max(worst_rel_var, std::abs(var / target - 1.0));
    }
  }
  o.detail << "max identity error " << worst_identity << ", max relative variance error " << worst_rel_var;
  o.require(worst_identity < 1e-12, "identity < 1e-12");
  o.require(worst_rel_var < 0.05, "variance within 5%");
}

// 3. Relay power examples and energy identities.
void energy_accounting(Outcome& o) {
  const double tsr = relay_power_tsr(0.5, 0.8, 1.0);
  const double psr = relay_power_psr(0.75, 0.8, 1.0);
  // Exact up to the rounding of the decimal inputs (one ulp).
  const double ulp = std::numeric_limits<double>::epsilon();
  o.detail.precision(17);
  o.detail << "P_R tsr " << tsr << ", psr " << psr;
  o.require(std::abs(tsr - 1.6) <= ulp * 1.6, "tsr example 1.6");
  o.require(std::abs(psr - 0.6) <= ulp * 0.6, "psr example 0.6");

  double worst = 0.0;
  for (double s : {1e-3, 0.1546, 1.0, 250.0})
    for (int i = 1; i < 100; ++i) {
      const double x = i / 100.0;
      const auto t = ProtocolParams::tsr(x);
      const auto p = ProtocolParams::psr(x);
      const double scale = std::max(1.0, s);
      worst = std::max(worst, std::abs(harvested_energy(t, s) - 0.8 * x * s) / scale);
      worst = std::max(worst, std::abs(relay_power(t, s) * (1.0 - x) / 2.0 - harvested_energy(t, s)) / scale);
      worst = std::max(worst, std::abs(harvested_energy(p, s) - 0.8 * x * s / 2.0) / scale);
      worst = std::max(worst, std::abs(relay_power(p, s) / 2.0 - harvested_energy(p, s)) / scale);
    }
  o.detail << ", max identity error " << worst;
  o.require(worst <= 1e-12, "identities to 1e-12");
}

// 4. Optimal fractions at 20 dB, perfect CSI.
void optimal_fractions(Outcome& o) {
  const auto t0 = Clock::now();
  for (Protocol kind : {Protocol::Tsr, Protocol::Psr}) {
    OptimizeSpec spec;
    spec.kind = kind;
    spec.snr_db = 20.0;
    spec.trials = 10000;
    spec.seed = 1;
    const OptimizeResult r = optimize_fraction(spec);
    const auto& opt = r.optimum;
    const bool tsr = kind == Protocol::Tsr;
    const double lo = tsr ? 0.12 : 0.68, hi = tsr ? 0.26 : 0.82;
    const std::string name = tsr ? "alpha*" : "rho*";
    o.detail << name << " = " << opt.x << " (C_D " << opt.value.value << "); ";
    o.require(opt.x >= lo && opt.x <= hi, name + " in [" + std::to_string(lo).substr(0, 4) + ", " +
                                              std::to_string(hi).substr(0, 4) + "]");
    o.require(opt.unimodal, name + " coarse profile unimodal");
    for (const ProfilePoint* b : {&opt.coarse.front(), &opt.coarse.back()}) {
      const double margin = opt.value.value - b->y.value;
      o.require(margin > 2.0 * combined({opt.value.std_error, b->y.std_error}),
                name + " boundary x=" + std::to_string(b->x).substr(0, 4) + " inferior by > 2 stderr");
    }
  }
  const double elapsed = seconds_since(t0);
  o.detail << elapsed << " s";
  o.require(elapsed < 60.0, "runtime < 60 s");
}

// 5. PSR >= TSR at the fractions optimized for each SNR.
void protocol_ordering(Outcome& o) {
  for (double snr = 0.0; snr <= 30.0; snr += 5.0) {
    SweepRow best[2];
    for (Protocol kind : {Protocol::Tsr, Protocol::Psr}) {
      OptimizeSpec spec;
      spec.kind = kind;
      spec.snr_db = snr;
      best[kind == Protocol::Psr] = optimize_fraction(spec).row;
    }
    const SweepRow& t = best[0];
    const SweepRow& p = best[1];
    const double slack = 2.0 * combined({t.c_d_stderr, p.c_d_stderr});
    o.detail << snr << " dB: psr " << p.c_d_mean << " (rho " << p.fraction() << ") vs tsr " << t.c_d_mean
             << " (alpha " << t.fraction() << "); ";
    o.require(p.c_d_mean >= t.c_d_mean - slack, "psr >= tsr at " + std::to_string(static_cast<int>(snr)) + " dB");
  }
}

// 6. At 20 dB with a small SNR-independent error, primary users lose more
// than the destination, and PSR loses more than TSR.
void csi_loss_ordering(Outcome& o) {
  double loss_d[2] = {}, se_d[2] = {};
  for (auto params : {ProtocolParams::tsr(0.19), ProtocolParams::psr(0.75)}) {
    const int k = params.kind == Protocol::Psr;
    const ErgodicResult perfect = ergodic(params, 20.0, PerfectCsi{});
    const ErgodicResult mism = ergodic(params, 20.0, kLowError);
    loss_d[k] = perfect.c_d.mean - mism.c_d.mean;
    se_d[k] = combined({perfect.c_d.std_error, mism.c_d.std_error});
    o.detail << protocol_name(params.kind) << ": loss_D " << loss_d[k];
    for (int j = 0; j < 2; ++j) {
      const double loss_pu = perfect.c_p[j].mean - mism.c_p[j].mean;
      o.detail << ", loss_PU" << j + 1 << " " << loss_pu;
      o.require(loss_pu > 3.0 * loss_d[k], std::string(protocol_name(params.kind)) + " loss_PU" +
                                               std::to_string(j + 1) + " > 3 x loss_D");
    }
    o.detail << "; ";
  }
  o.require(loss_d[1] >= loss_d[0] - 2.0 * combined({se_d[0], se_d[1]}), "psr loss_D > tsr loss_D within 2 stderr");
}

// 7. SNR-dependent error: large gap at low SNR, vanishing gap at high SNR.
void mismatch_shape(Outcome& o) {
  for (auto params : {ProtocolParams::tsr(0.19), ProtocolParams::psr(0.75)}) {
    for (const CsiMismatch& m : {kDecaying, kDecayingSlow}) {
      double gap[2];
      for (int i = 0; i < 2; ++i) {
        const double snr = i == 0 ? 0.0 : 30.0;
        gap[i] = ergodic(params, snr, PerfectCsi{}).c_d.mean - ergodic(params, snr, m).c_d.mean;
      }
      const std::string tag =
          std::string(protocol_name(params.kind)) + " (" + format_number(m.kappa) + "," + format_number(m.psi) + ")";
      o.detail << tag << ": gap0 " << gap[0] << ", gap30 " << gap[1] << "; ";
      o.require(gap[0] > 4.0 * gap[1], tag + " gap at 0 dB > 4 x gap at 30 dB");
      if (m.kappa == kDecaying.kappa) o.require(gap[1] < 0.1, tag + " gap at 30 dB < 0.1");
    }
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 8. Byte-identical CLI reruns and worker-count invariance.
void determinism(Outcome& o) {
  const fs::path dir = fs::temp_directory_path() / ("ia_swipt_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string args = std::string(IA_SWIPT_CLI) +
                           " sweep-snr --protocol psr --rho 0.75 --snr-db 0:30:2 --csi 1,10 --trials 2000 --seed 11";
  std::vector<std::string> files;
  for (const char* threads : {"1", "1", "8"}) {
    const fs::path out = dir / ("run" + std::to_string(files.size()) + ".csv");
    const int rc = shell("IA_SWIPT_THREADS=" + std::string(threads) + " " + args + " --out " + out.string() +
                         " > /dev/null");
    o.require(rc == 0, "CLI exit status 0");
    files.push_back(slurp(out));
  }
  o.require(!files[0].empty() && files[0] == files[1], "identical reruns are byte-identical");
  o.require(files[0] == files[2], "CLI output identical at 1 and 8 workers");

  SweepSpec spec;
  spec.kind = Protocol::Tsr;
  spec.snr_db = {0.0, 15.0, 30.0};
  spec.fractions = {0.1, 0.19, 0.5};
  spec.scenario = kDecaying;
  spec.trials = 3000;
  const SweepResult one = sweep(spec, {1});
  const SweepResult eight = sweep(spec, {8});
  o.require(one.rows == eight.rows, "library sweep identical at 1 and 8 workers");
  o.detail << files[0].size() << "-byte CSV compared across 3 runs, " << one.rows.size()
           << " library rows compared";
  fs::remove_all(dir);
}

// 9. Full SNR sweep: 2 protocols x 4 CSI scenarios x 16 SNR points.
void performance(Outcome& o) {
  const auto t0 = Clock::now();
  std::size_t rows = 0;
  for (Protocol kind : {Protocol::Tsr, Protocol::Psr}) {
    for (CsiScenario csi : {CsiScenario{PerfectCsi{}}, CsiScenario{kLowError}, CsiScenario{kDecaying},
                            CsiScenario{kDecayingSlow}}) {
      SweepSpec spec;
      spec.kind = kind;
      spec.snr_db.clear();
      for (int s = 0; s <= 30; s += 2) spec.snr_db.push_back(s);
      spec.fractions = {kind == Protocol::Tsr ? 0.19 : 0.75};
      spec.scenario = csi;
      spec.trials = 10000;
      rows += sweep(spec).rows.size();
    }
  }
  const double elapsed = seconds_since(t0);
  o.detail << rows << " points x 10000 trials on " << resolve_threads({}) << " worker(s) in " << elapsed << " s";
  o.require(rows == 128, "128 points");
  o.require(elapsed < 180.0, "runtime < 180 s");
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "IA exactness", ia_exactness},
      {2, "CSI decomposition", csi_decomposition},
      {3, "energy accounting", energy_accounting},
      {4, "optimal fractions", optimal_fractions},
      {5, "protocol ordering", protocol_ordering},
      {6, "CSI-loss ordering", csi_loss_ordering},
      {7, "mismatch shape", mismatch_shape},
      {8, "determinism", determinism},
      {9, "performance", performance},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long id = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || id < 1 || id > static_cast<long>(all.size())) {
      std::cerr << "usage: acceptance [criterion 1-9 ...]\n";
      return 2;
    }
    selected.push_back(static_cast<int>(id));
  }
  if (selected.empty())
    for (const auto& c : all) selected.push_back(c.id);

  int failures = 0;
  for (int id : selected) {
    const Criterion& c = all[static_cast<std::size_t>(id - 1)];
    Outcome o;
    o.detail.precision(6);
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << c.id << " (" << c.title << "): " << (o.pass ? "PASS" : "FAIL") << " - "
              << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
