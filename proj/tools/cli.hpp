#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace omdist::cli {

// Runs one command. `args` excludes the program name. Exit status:
//   0  consistent / entailed / equivalent / true
//   1  inconsistent / not entailed / not equivalent / false
//   2  parse or usage error (details on err)
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace omdist::cli
