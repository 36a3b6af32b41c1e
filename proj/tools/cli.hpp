#pragma once

namespace procnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs one subcommand. Returns the process exit code.
int dispatch(int argc, char** argv);

}  // namespace procnet::cli
