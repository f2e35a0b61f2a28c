#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lagcoh::cli {

enum Exit : int { Ok = 0, ParseFailure = 2, Invalid = 3, Incomplete = 4, NotInvariant = 5 };

// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lagcoh::cli
