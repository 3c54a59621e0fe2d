// Wall-clock comparison of the serial reference and the OpenMP trial kernel.
//
//   bench_ergodic [trials] [max_threads]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "iaswipt/capacity.hpp"

using namespace iaswipt;

namespace {

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
  const int max_threads = argc > 2 ? std::atoi(argv[2]) : omp_get_num_procs();

  ErgodicConfig cfg;
  cfg.topology = Topology::uniform(2, 1, 3.0, 2.7);
  cfg.powers = PowerConfig::from_snr_db(20.0);
  cfg.scenario = CsiMismatch{0.0, 0.001};
  cfg.params = ProtocolParams::psr(0.75);
  cfg.trials = trials;
  cfg.seed = 7;

  ErgodicResult ref;
  const double t_ref = seconds([&] { ref = ergodic_capacity_reference(cfg); });
  std::printf("%-12s %8s %10s %12s %14s\n", "kernel", "threads", "seconds", "us/trial", "C_D");
  std::printf("%-12s %8d %10.3f %12.2f %14.9f\n", "serial-ref", 1, t_ref, 1e6 * t_ref / trials, ref.c_d.mean);

  for (int threads = 1; threads <= std::max(1, max_threads); threads *= 2) {
    ErgodicResult par;
    const double t = seconds([&] { par = ergodic_capacity(cfg, ExecutionOptions{threads}); });
    std::printf("%-12s %8d %10.3f %12.2f %14.9f  speedup %.2fx  |diff| %.1e\n", "openmp", threads, t,
                1e6 * t / trials, par.c_d.mean, t_ref / t, std::abs(par.c_d.mean - ref.c_d.mean));
  }
  return 0;
}
