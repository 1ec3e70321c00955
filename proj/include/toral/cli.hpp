#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toral {

// Runs one subcommand. `args` excludes the program name. Returns 0 on
// success, 1 for bad input (including unknown flags), 2 when a computation
// fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace toral
