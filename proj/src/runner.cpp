#include "iaswipt/runner.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "iaswipt/csv_io.hpp"
#include "iaswipt/sweep.hpp"

namespace iaswipt {

int run(const RunConfig& c, std::ostream& out, std::ostream& err, const ExecutionOptions& exec) {
  const auto t0 = std::chrono::steady_clock::now();
  const Topology topo = Topology::uniform(c.antennas, c.streams, c.distance, c.pathloss_exponent);
  std::vector<SweepRow> rows;
  std::size_t resamples = 0;
  const char* header = kSweepHeader;

  try {
    if (c.command == Command::Optimize) {
      header = kOptimumHeader;
      for (double snr : c.snr_db) {
        OptimizeSpec spec{c.protocol, snr, c.scenario, c.trials, c.seed, c.tolerance, topo, c.eta, c.noise_power};
        const OptimizeResult r = optimize_fraction(spec, exec);
        if (!r.optimum.unimodal) err << "warning: " << r.optimum.warning << " (snr_db=" << snr << ")\n";
        rows.push_back(r.row);
        resamples += r.resamples;
      }
    } else {
      SweepSpec spec{c.protocol, c.snr_db, c.fractions, c.scenario, c.trials, c.seed, topo, c.eta, c.noise_power};
      SweepResult r = sweep(spec, exec);
      rows = std::move(r.rows);
      resamples = r.resamples;
    }
    write_csv(rows, c.out, header);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", elapsed);
  out << command_name(c.command) << ' ' << protocol_name(c.protocol) << ": " << rows.size() << " rows, "
      << c.trials << " trials/point, " << resamples << " resamples, " << secs << " s -> " << c.out << '\n';
  return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_config(argc, argv);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (!config) return 0;
  return run(*config, out, err);
}

}  // namespace iaswipt
