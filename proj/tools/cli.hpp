#ifndef FAIRPLAN_CLI_HPP
#define FAIRPLAN_CLI_HPP

namespace fairplan {

// Entry point shared by the binary and the end-to-end tests.
// Exit codes: 0 success, 2 input/usage error, 3 convergence or numerical
// failure.
int run_cli(int argc, const char* const* argv);

}  // namespace fairplan

#endif  // FAIRPLAN_CLI_HPP
