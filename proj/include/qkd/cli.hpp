#pragma once

namespace qkd {

// Full command-line entry point; returns the process exit code
// (0 success, 2 usage/config error, 1 internal failure). Used by the
// qkdtool binary and exercised directly by the tests.
int run_cli(int argc, const char* const* argv);

}  // namespace qkd
