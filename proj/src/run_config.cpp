#include "iaswipt/run_config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace iaswipt {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || t[0] == '-' || end != t.c_str() + t.size() || errno == ERANGE)
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

int parse_positive_int(const std::string& text, const std::string& key) {
  const auto v = parse_unsigned(text, key);
  if (v < 1 || v > 4096) throw ConfigError(key + ": must be a positive integer");
  return static_cast<int>(v);
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::SweepSnr: return "sweep-snr";
    case Command::SweepFraction: return "sweep-fraction";
    case Command::Optimize: return "optimize";
  }
  return "?";
}

std::vector<double> parse_grid(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t.find(':') == std::string::npos) return {parse_number(t, key)};

  std::vector<std::string> parts;
  std::stringstream ss(t);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError(key + ": expected start:stop:step, got '" + text + "'");
  const double start = parse_number(parts[0], key);
  const double stop = parse_number(parts[1], key);
  const double step = parse_number(parts[2], key);
  if (!(step > 0.0)) throw ConfigError(key + ": step must be positive");
  if (start > stop) throw ConfigError(key + ": start must not exceed stop");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  if (n > 100000) throw ConfigError(key + ": grid too large");
  std::vector<double> grid;
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

CsiScenario parse_csi(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "perfect") return PerfectCsi{};
  const auto comma = t.find(',');
  if (comma == std::string::npos) throw ConfigError(key + ": expected 'perfect' or 'kappa,psi', got '" + text + "'");
  CsiMismatch m{parse_number(t.substr(0, comma), key), parse_number(t.substr(comma + 1), key)};
  if (!(m.kappa >= 0.0)) throw ConfigError(key + ": kappa must be >= 0");
  if (!(m.psi > 0.0)) throw ConfigError(key + ": psi must be > 0");
  return m;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command", "protocol",  "snr-db",  "alpha",    "rho",      "csi",
      "eta",     "trials",    "seed",    "antennas", "streams",  "distance",
      "pathloss-exponent",    "noise-power",         "tolerance", "out"};
  return keys;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  const auto& keys = config_keys();
  std::map<std::string, std::string> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("config: unknown key '" + key + "' (line " + std::to_string(lineno) + ")");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig make_run_config(const std::string& command, const std::map<std::string, std::string>& s) {
  RunConfig c;
  if (command == "sweep-snr") c.command = Command::SweepSnr;
  else if (command == "sweep-fraction") c.command = Command::SweepFraction;
  else if (command == "optimize") c.command = Command::Optimize;
  else throw ConfigError("command: unknown command '" + command + "' (sweep-snr, sweep-fraction, optimize)");

  auto get = [&](const std::string& k) -> std::optional<std::string> {
    if (auto it = s.find(k); it != s.end()) return it->second;
    return std::nullopt;
  };

  if (auto p = get("protocol")) {
    if (*p == "tsr") c.protocol = Protocol::Tsr;
    else if (*p == "psr") c.protocol = Protocol::Psr;
    else throw ConfigError("protocol: expected 'tsr' or 'psr', got '" + *p + "'");
  } else {
    throw ConfigError("protocol: required (tsr or psr)");
  }

  const bool tsr = c.protocol == Protocol::Tsr;
  const auto alpha = get("alpha");
  const auto rho = get("rho");
  if (tsr && rho) throw ConfigError("rho: not valid for protocol tsr (use alpha)");
  if (!tsr && alpha) throw ConfigError("alpha: not valid for protocol psr (use rho)");
  const std::string fkey = tsr ? "alpha" : "rho";
  const auto fraction = tsr ? alpha : rho;

  switch (c.command) {
    case Command::SweepSnr:
      c.snr_db = parse_grid(get("snr-db").value_or("0:30:2"), "snr-db");
      c.fractions = parse_grid(fraction.value_or(tsr ? "0.19" : "0.75"), fkey);
      if (c.fractions.size() != 1) throw ConfigError(fkey + ": sweep-snr takes a single fraction");
      break;
    case Command::SweepFraction:
      c.snr_db = parse_grid(get("snr-db").value_or("20"), "snr-db");
      c.fractions = parse_grid(fraction.value_or("0.05:0.95:0.05"), fkey);
      break;
    case Command::Optimize:
      if (fraction) throw ConfigError(fkey + ": optimize searches the fraction; do not set it");
      c.snr_db = parse_grid(get("snr-db").value_or("20"), "snr-db");
      break;
  }
  for (double f : c.fractions)
    if (!(f > 0.0 && f < 1.0)) throw ConfigError(fkey + ": values must lie in (0, 1)");

  if (auto v = get("csi")) c.scenario = parse_csi(*v, "csi");
  if (auto v = get("eta")) {
    c.eta = parse_number(*v, "eta");
    if (!(c.eta > 0.0 && c.eta < 1.0)) throw ConfigError("eta: must lie in (0, 1)");
  }
  if (auto v = get("trials")) {
    c.trials = parse_unsigned(*v, "trials");
    if (c.trials < 1) throw ConfigError("trials: must be at least 1");
  }
  if (auto v = get("seed")) c.seed = parse_unsigned(*v, "seed");
  if (auto v = get("antennas")) c.antennas = parse_positive_int(*v, "antennas");
  if (auto v = get("streams")) c.streams = parse_positive_int(*v, "streams");
  if (2 * c.streams > c.antennas) throw ConfigError("streams: must not exceed antennas/2");
  if (auto v = get("distance")) {
    c.distance = parse_number(*v, "distance");
    if (!(c.distance > 0.0)) throw ConfigError("distance: must be positive");
  }
  if (auto v = get("pathloss-exponent")) {
    c.pathloss_exponent = parse_number(*v, "pathloss-exponent");
    if (!(c.pathloss_exponent >= 0.0)) throw ConfigError("pathloss-exponent: must be non-negative");
  }
  if (auto v = get("noise-power")) {
    c.noise_power = parse_number(*v, "noise-power");
    if (!(c.noise_power > 0.0)) throw ConfigError("noise-power: must be positive");
  }
  if (auto v = get("tolerance")) {
    c.tolerance = parse_number(*v, "tolerance");
    if (!(c.tolerance > 0.0)) throw ConfigError("tolerance: must be positive");
  }
  c.out = get("out").value_or("");
  if (c.out.empty()) throw ConfigError("out: output path required");
  return c;
}

std::optional<RunConfig> parse_config(int argc, const char* const* argv) {
  CLI::App app{"Monte Carlo capacity of an energy-harvesting relay network with interference alignment",
               "ia_swipt"};
  std::string command;
  std::string config_path;
  app.add_option("command", command, "sweep-snr | sweep-fraction | optimize");
  app.add_option("--config", config_path, "key=value config file");

  std::map<std::string, std::optional<std::string>> flags;
  for (const auto& key : config_keys()) {
    if (key == "command") continue;
    flags[key];
  }
  auto opt = [&](const std::string& key, const std::string& help) { app.add_option("--" + key, flags[key], help); };
  opt("protocol", "tsr | psr");
  opt("snr-db", "SNR in dB: value or start:stop:step");
  opt("alpha", "TSR time-switching fraction: value or grid");
  opt("rho", "PSR power-splitting fraction: value or grid");
  opt("csi", "perfect | kappa,psi");
  opt("eta", "energy conversion efficiency (default 0.8)");
  opt("trials", "Monte Carlo trials per point (default 10000)");
  opt("seed", "master seed (default 1)");
  opt("antennas", "antennas per node (default 2)");
  opt("streams", "streams per transmitter (default 1)");
  opt("distance", "link distance in meters (default 3)");
  opt("pathloss-exponent", "path-loss exponent (default 2.7)");
  opt("noise-power", "noise power (default 1)");
  opt("tolerance", "golden-section tolerance for optimize (default 1e-3)");
  opt("out", "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("arguments: ") + e.what());
  }

  std::map<std::string, std::string> settings;
  if (!config_path.empty()) settings = read_config_file(config_path);
  for (const auto& [key, value] : flags)
    if (value) settings[key] = *value;
  if (command.empty()) {
    if (auto it = settings.find("command"); it != settings.end()) command = it->second;
    else throw ConfigError("command: required (sweep-snr, sweep-fraction, optimize)");
  }
  return make_run_config(command, settings);
}

}  // namespace iaswipt
