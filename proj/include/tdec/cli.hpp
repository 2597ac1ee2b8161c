#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tdec::cli {

// Runs one command line (args[0] is the program name). Returns the process
// exit code: 0 ok, 1 I/O, 2 format or flag error, 3 data or protocol error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdec::cli
