#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace grafield::cli {

/// Parsed batch-run configuration. One command per process.
struct RunConfig {
    std::string command;  // analyze | embed | changepoint | compare | pagerank
    std::string input;
    std::string out_dir = ".";
    std::string operator_name = "laplacian";
    std::string tau_spec;  // laplace | kt | perks | minimax | stein | <float>
    double alpha = 0.15;
    int m = 0;
    int k = 0;  // 0 = all nontrivial
    int t = 1;
    uint64_t seed = 42;
};

/// Runs one dispatched command. Exit codes: 0 success, 1 usage error,
/// 2 data error. Diagnostics go to stderr.
int run(int argc, const char* const* argv);

int dispatch(const RunConfig& cfg);

}  // namespace grafield::cli
