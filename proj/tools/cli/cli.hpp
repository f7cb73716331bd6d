#pragma once

#include <iosfwd>

namespace trispin::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failure = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_model_error = 3;
inline constexpr int exit_io_error = 4;

// Full command-line front end; returns the process exit code. Streams are
// injected so the commands can be driven in-process by the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trispin::cli
