#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stoprule::cli {

// Exit codes of run().
inline constexpr int kOk = 0;
inline constexpr int kComputationError = 1;
inline constexpr int kFlagError = 2;

// Runs one command line; args exclude the program name. The result goes to
// `out` unless --output names a file, diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Integer grid "lo:hi:step" (or a single value) for n sweeps.
std::vector<long long> parse_int_grid(const std::string& text);
// Real grid "lo:hi:step" (or a single value); hi is included up to rounding.
std::vector<double> parse_real_grid(const std::string& text);

}  // namespace stoprule::cli
