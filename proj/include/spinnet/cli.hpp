#pragma once

#include <string>
#include <vector>

namespace spinnet::cli {

// Exit codes of the reproduction driver.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericFailure = 3;

// args[0] is the program name. Results go to --out (default stdout);
// diagnostics go to stderr.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

// Registered subcommand names, in help order.
std::vector<std::string> experiments();

}  // namespace spinnet::cli
