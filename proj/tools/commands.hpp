#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netgame::cli {

/// Runs one command line (without the program name). Results go to `out`
/// unless --out names a file; every failure writes exactly one line to
/// `err` and returns nonzero.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace netgame::cli
