#ifndef OPECALC_CLI_HPP
#define OPECALC_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace opecalc {

/// Runs the command line `args` (args[0] is the subcommand, no program
/// name). Returns 0 on pass, 1 on a mathematical failure, 2 on usage or
/// input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opecalc

#endif  // OPECALC_CLI_HPP
