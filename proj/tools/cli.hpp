#pragma once

// Command-line front end. Exit codes: 0 success, 1 analysis failure (gate,
// infeasible grid, oracle mismatch), 2 usage or input error.

#include <iosfwd>
#include <string>
#include <vector>

#include "dynroute/model.hpp"

namespace dynroute::cli {

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "start:stop:step" (inclusive) or a comma-separated list. The result
/// is strictly increasing and non-empty; throws std::invalid_argument otherwise.
std::vector<double> parse_grid(const std::string& text);

/// Reads GameParams from JSON text; unknown keys and wrong types are errors.
GameParams params_from_json(const std::string& text);

}  // namespace dynroute::cli
