#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subcert::cli {

/// Full command-line front end. `args` excludes the program name. Writes the
/// deterministic JSON report to `out` and a one-line human summary to `err`;
/// returns the process exit code (0 success, 2 validation, 3 internal
/// invariant, 4 io, 5 parse, 6 parameter).
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace subcert::cli
