#ifndef SLGREEN_CLI_HPP
#define SLGREEN_CLI_HPP

namespace slgreen {

// Entry point behind the slgreen executable. Exit codes: 0 success,
// 1 computational failure, 2 usage or parse error.
int run_command(int argc, const char* const* argv);

} // namespace slgreen

#endif
