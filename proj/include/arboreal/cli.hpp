#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arboreal::cli {

/// Runs one CLI invocation. Exit codes: 0 all checks passed, 1 a derived
/// invariant failed, 2 input error, 3 cap exceeded. Output is
/// deterministic for fixed inputs; numeric output is exact unless
/// --decimal is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace arboreal::cli
