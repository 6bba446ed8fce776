#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace graphcake {

// Runs the command-line interface. Exit codes: 0 success / all checks pass,
// 1 verification failure, 2 input error, 3 search budget exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace graphcake
