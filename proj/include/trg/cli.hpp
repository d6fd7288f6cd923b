#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trg::cli {

// Dispatches a command line (without argv[0]). Returns 0 on success, 1 on a
// domain error (machine-readable {"error", "detail"} JSON on stdout) and 2 on
// a usage error (help text on stderr).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trg::cli
