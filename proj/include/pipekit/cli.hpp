// cli.hpp
//
// The `pipekit` command line. Every subcommand reads files, calls one module
// operation and prints the result. Exit codes: 0 success, 1 domain error,
// 2 usage error.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pipekit {

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pipekit
