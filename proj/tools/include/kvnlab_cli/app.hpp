#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kvnlab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_physics = 3;
inline constexpr int exit_io = 4;

const char* version();

int run_command(const std::string& config_path, std::ostream& out, std::ostream& err);
int verify_command(const std::string& config_path, std::ostream& out, std::ostream& err);
int list_command(std::ostream& out);

// Entry point shared by the binary and the tests.
int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kvnlab::cli
