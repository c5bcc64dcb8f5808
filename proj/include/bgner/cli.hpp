#ifndef BGNER_CLI_HPP
#define BGNER_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bgner::cli {

/// Dispatches one invocation: `args` holds everything after the program
/// name. Returns the process exit code: 0 on success, 1 for usage or
/// configuration errors, 2 for data errors. All output is deterministic.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace bgner::cli

#endif
