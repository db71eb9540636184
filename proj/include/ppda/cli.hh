// cli.hh -- command-line front end
//
// Exit status: 0 bisimilar / success, 1 not bisimilar / violation,
// 2 inconclusive, 3 usage or input error.
#ifndef PPDA_CLI_HH
#define PPDA_CLI_HH

#include <ostream>
#include <string>
#include <vector>

namespace ppda {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 3;

// args excludes the program name
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ppda

#endif
