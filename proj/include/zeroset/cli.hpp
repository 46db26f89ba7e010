#pragma once

#include <string>
#include <vector>

#include "zeroset/geometry.hpp"

namespace zeroset {

// "lo,hi" (replicated across dim axes) or "lo,hi;lo,hi;..." (one pair per
// axis).  Throws std::invalid_argument on malformed text or a pair-count that
// matches neither form.
BoxDomain parse_domain(const std::string& text, int dim);

// Comma-separated doubles; throws std::invalid_argument on junk or emptiness.
std::vector<double> parse_number_list(const std::string& text);

// Full command-line front end (subcommands: solve, bench, sweep, list).
// Returns the process exit code: 0 success, 2 when an evaluation budget cut
// the run short, 1 on any error.
int run_cli(int argc, const char* const* argv);

}  // namespace zeroset
