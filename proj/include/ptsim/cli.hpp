#pragma once

#include <string>
#include <vector>

#include "ptsim/quantum_core.hpp"

namespace ptsim::cli {

// "value" or "start:stop:step" with step > 0; stop is included within half a
// step. Throws std::invalid_argument on malformed text or an empty range.
std::vector<double> parse_grid(const std::string& text);

// Concatenation of parse_grid over repeated flag values.
std::vector<double> expand_grids(const std::vector<std::string>& specs);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

// Families accepted by the front end. p is ignored for phi-plus.
DensityMatrix make_state(const std::string& family, double p);

// Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 I/O error.
int run(int argc, const char* const* argv);

}  // namespace ptsim::cli
