#include "iaswipt/csv_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace iaswipt {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  out.push_back(field);
  return out;
}

double to_double(const std::string& s, int lineno) {
  std::size_t pos = 0;
  try {
    const double v = std::stod(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
}

std::uint64_t to_u64(const std::string& s, int lineno) {
  std::size_t pos = 0;
  try {
    const auto v = std::stoull(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad integer '" + s + "'");
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string format_row(const SweepRow& r) {
  std::string s = protocol_name(r.protocol);
  auto field = [&](const std::string& v) {
    s += ',';
    s += v;
  };
  auto opt = [&](const std::optional<double>& v) { field(v ? format_number(*v) : std::string{}); };
  field(format_number(r.snr_db));
  if (const auto* m = std::get_if<CsiMismatch>(&r.scenario)) {
    field(format_number(m->kappa));
    field(format_number(m->psi));
  } else {
    field({});
    field({});
  }
  opt(r.alpha);
  opt(r.rho);
  for (double v : {r.c_d_mean, r.c_d_stderr, r.c_p1_mean, r.c_p1_stderr, r.c_p2_mean, r.c_p2_stderr})
    field(format_number(v));
  field(std::to_string(r.trials));
  field(std::to_string(r.seed));
  return s;
}

std::string render_csv(const std::vector<SweepRow>& rows, const char* header) {
  std::string out = header;
  out += '\n';
  for (const auto& r : rows) {
    out += format_row(r);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
  }
}

void write_csv(const std::vector<SweepRow>& rows, const std::string& path, const char* header) {
  write_file_atomic(path, render_csv(rows, header));
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SweepRow> rows;
  bool header_seen = false;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kSweepHeader && line != kOptimumHeader)
        throw std::runtime_error("csv line " + std::to_string(lineno) + ": unexpected header");
      header_seen = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 14) throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected 14 fields");
    SweepRow r;
    if (f[0] == "tsr") r.protocol = Protocol::Tsr;
    else if (f[0] == "psr") r.protocol = Protocol::Psr;
    else throw std::runtime_error("csv line " + std::to_string(lineno) + ": bad protocol '" + f[0] + "'");
    r.snr_db = to_double(f[1], lineno);
    if (f[2].empty() != f[3].empty())
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": kappa and psi must both be set or empty");
    if (f[2].empty()) r.scenario = PerfectCsi{};
    else r.scenario = CsiMismatch{to_double(f[2], lineno), to_double(f[3], lineno)};
    if (!f[4].empty()) r.alpha = to_double(f[4], lineno);
    if (!f[5].empty()) r.rho = to_double(f[5], lineno);
    r.c_d_mean = to_double(f[6], lineno);
    r.c_d_stderr = to_double(f[7], lineno);
    r.c_p1_mean = to_double(f[8], lineno);
    r.c_p1_stderr = to_double(f[9], lineno);
    r.c_p2_mean = to_double(f[10], lineno);
    r.c_p2_stderr = to_double(f[11], lineno);
    r.trials = to_u64(f[12], lineno);
    r.seed = to_u64(f[13], lineno);
    rows.push_back(r);
  }
  if (!header_seen) throw std::runtime_error("csv: missing header");
  return rows;
}

std::vector<SweepRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace iaswipt
