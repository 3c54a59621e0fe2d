// Executes a parsed RunConfig and writes its CSV.
#pragma once

#include <iosfwd>

#include "iaswipt/capacity.hpp"
#include "iaswipt/run_config.hpp"

namespace iaswipt {

/// Exit codes: 0 success, 1 runtime failure, 2 configuration error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err, const ExecutionOptions& exec = {});

/// parse_config() followed by run(); never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iaswipt
