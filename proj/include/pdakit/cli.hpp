#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdakit::cli {

// Exit codes: 0 success, 1 domain error (bad/infeasible parameters),
// 2 I/O or parse error, 3 validation or simulation failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdakit::cli
