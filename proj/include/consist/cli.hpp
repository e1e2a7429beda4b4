#pragma once

namespace consist::cli {

// Full command-line surface: canonicalize, complete, sweep, attack.
// Returns the process exit code: 0 success, 2 usage/validation errors,
// 3 numerical failures.
int run(int argc, const char* const* argv);

}  // namespace consist::cli
