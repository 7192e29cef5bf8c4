#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robclust::cli {

enum ExitCode { ok = 0, usage = 1, data_error = 2, degenerate = 3 };

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace robclust::cli
