// Command-line orchestration: verification suites, density runs, scans,
// and report emission.  Exit codes: 0 success, 1 identity failure, 2 usage.

#pragma once

#include <string>
#include <vector>

namespace ecdensity::cli {

int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // without argv[0]

// Exhaustive identity suites up to p_max; returns 0/1 like the subcommand.
// inject_fault corrupts one closed-form value to exercise the failure path.
int verify_charsums(uint64_t p_max, bool inject_fault, std::string* summary,
                    uint64_t seed = 12345, int threads = 1);

}  // namespace ecdensity::cli
