// CSV output (schema 1). UTF-8, LF line endings, numbers with 9 significant
// digits, empty kappa/psi for perfect CSI and an empty unused fraction field.
#pragma once

#include <string>
#include <vector>

#include "iaswipt/sweep.hpp"

namespace iaswipt {

inline constexpr const char* kSweepHeader =
    "protocol,snr_db,kappa,psi,alpha,rho,c_d_mean,c_d_stderr,c_p1_mean,c_p1_stderr,c_p2_mean,c_p2_stderr,"
    "trials,seed";

inline constexpr const char* kOptimumHeader =
    "protocol,snr_db,kappa,psi,alpha_star,rho_star,c_d_star,c_d_stderr,c_p1_mean,c_p1_stderr,c_p2_mean,"
    "c_p2_stderr,trials,seed";

/// %.9g
std::string format_number(double v);

std::string format_row(const SweepRow& row);

/// Header plus one line per row. `header` selects the sweep or optimum naming;
/// the row layout is the same.
std::string render_csv(const std::vector<SweepRow>& rows, const char* header = kSweepHeader);

/// Writes through a temporary file in the target directory and renames it
/// into place; on failure nothing is left at `path`. Throws std::runtime_error.
void write_file_atomic(const std::string& path, const std::string& contents);

void write_csv(const std::vector<SweepRow>& rows, const std::string& path, const char* header = kSweepHeader);

/// Parses text produced by render_csv (either header). Lines starting with
/// '#' are skipped. Throws std::runtime_error on malformed input.
std::vector<SweepRow> parse_csv(const std::string& text);

std::vector<SweepRow> read_csv(const std::string& path);

}  // namespace iaswipt
