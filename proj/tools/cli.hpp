#pragma once

#include <string>
#include <vector>

namespace subharm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_solver = 2;
inline constexpr int exit_usage = 64;
inline constexpr int exit_validation = 65;
inline constexpr int exit_io = 66;
inline constexpr int exit_numeric = 70;
inline constexpr int exit_divergence = 71;

/// Runs one command; args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args);

}  // namespace subharm::cli
