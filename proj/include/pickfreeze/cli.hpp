#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pickfreeze {

// "1,3" -> {1, 3}; elements are 1-based coordinates
std::vector<int> parse_subset(const std::string& text);

// "start:stop:step" (stop inclusive up to rounding) or a comma list
std::vector<double> parse_grid(const std::string& text);

// Runs one command given argv-style arguments (program name excluded).
// Returns the process exit code: 0 success, 2 configuration error,
// 3 numerical/degenerate error. Tables go to `out` unless --out is given;
// diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pickfreeze
