#pragma once

// Batch pipelines behind the CLI subcommands: the mode sweep with its CSV and
// JSON artifacts, the prediction table, and the reduction-identity suite.
// Work is distributed over a (k, L) task pool capped by WARP_THREADS; results
// are collected in task order so outputs are byte-stable.

#include <string>

#include "warpspec/config.hpp"
#include "warpspec/verifier.hpp"

namespace warpspec {

// exit codes shared by the CLI
inline constexpr int kExitOk = 0;
inline constexpr int kExitComparisonFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolverError = 3;

struct ComputeArtifacts {
    std::string csv;
    std::string report_json;
    int exit_code = kExitOk;
};

// sweep the configured tower of reduced operators, estimate per-mode band
// bottoms, compare against the closed-form predictions
ComputeArtifacts run_compute(const RunConfig& config);

// write artifacts under config.out_dir as modes.csv and report.json
void write_artifacts(const RunConfig& config, const ComputeArtifacts& artifacts);

// prediction table for all p in [0, N], one row per degree
std::string render_prediction_table(int N, double a, double b);

struct VerifyArtifacts {
    std::string jsonl;
    bool pass = false;
};

// runs on a fixed a < -1 profile so every f-derivative term carries weight
VerifyArtifacts run_verify(bool mutate, double base_step, int levels);

// pool size: WARP_THREADS when set, hardware concurrency otherwise
int worker_count();

}  // namespace warpspec
