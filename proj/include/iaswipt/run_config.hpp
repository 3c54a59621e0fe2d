// Command-line / config-file configuration for the simulator.
//
// Precedence: command-line flags > config-file keys > built-in defaults.
// Config files are flat `key=value` lines; `#` starts a comment. Keys are the
// long flag names without the leading dashes.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iaswipt/channel_model.hpp"
#include "iaswipt/eh_protocols.hpp"

namespace iaswipt {

/// Invalid configuration; the message names the offending key or flag.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { SweepSnr, SweepFraction, Optimize };

const char* command_name(Command c);

/// `start:stop:step` (stop included when it lands on the grid within 1e-9) or
/// a single number.
std::vector<double> parse_grid(const std::string& text, const std::string& key);

/// `perfect` or `kappa,psi`.
CsiScenario parse_csi(const std::string& text, const std::string& key);

struct RunConfig {
  Command command = Command::SweepSnr;
  Protocol protocol = Protocol::Tsr;
  std::vector<double> snr_db;
  std::vector<double> fractions;  // alpha (TSR) or rho (PSR); unused by optimize
  CsiScenario scenario = PerfectCsi{};
  double eta = 0.8;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  int antennas = 2;
  int streams = 1;
  double distance = 3.0;
  double pathloss_exponent = 2.7;
  double noise_power = 1.0;
  double tolerance = 1e-3;
  std::string out;
};

/// Every key the config file and flags accept.
const std::vector<std::string>& config_keys();

/// Reads a config file into key/value pairs. Unknown keys and malformed lines
/// throw ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Builds a RunConfig from merged settings (flags already applied over the
/// file). `command` is the positional command name.
RunConfig make_run_config(const std::string& command, const std::map<std::string, std::string>& settings);

/// Parses argv (program name first). Throws ConfigError on any problem;
/// returns std::nullopt when help was requested and printed.
std::optional<RunConfig> parse_config(int argc, const char* const* argv);

}  // namespace iaswipt
