// warpspec CLI: closed-form spectral predictions, truncation-ladder mode
// sweeps with CSV/JSON artifacts, and the reduction-identity check suite.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "warpspec/driver.hpp"

namespace {

struct ComputeFlags {
    std::string config_path;
    int p = -1;
    int kmax = -1;
    std::string ladder;
    std::string out;
    std::string family;
};

std::vector<double> parse_ladder(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for warped-product form Laplacians"};
    app.require_subcommand(1);

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "closed-form band table for all p");
    int pred_n = 3;
    double pred_a = -1.0, pred_b = -1.0;
    predict_cmd->add_option("--n", pred_n, "ambient dimension N")->required();
    predict_cmd->add_option("--a", pred_a, "radial exponent a (<= -1)")->required();
    predict_cmd->add_option("--b", pred_b, "sphere exponent b")->required();

    // compute
    auto* compute_cmd = app.add_subcommand("compute", "mode sweep: CSV + JSON report");
    ComputeFlags flags;
    compute_cmd->add_option("--config", flags.config_path, "TOML config file")->required();
    compute_cmd->add_option("--p", flags.p, "form degree override");
    compute_cmd->add_option("--kmax", flags.kmax, "mode cutoff override");
    compute_cmd->add_option("--ladder", flags.ladder, "truncation ladder, e.g. 40,80,160");
    compute_cmd->add_option("--out", flags.out, "output directory override");
    compute_cmd->add_option("--family", flags.family, "tower: type1 or type2");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "reduction-identity residual suite");
    bool mutate = false;
    double base_step = 0.02;
    int levels = 4;
    verify_cmd->add_flag("--mutate", mutate, "swap the coupling weights (must fail)");
    verify_cmd->add_option("--step", base_step, "base grid step");
    verify_cmd->add_option("--levels", levels, "refinement levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? warpspec::kExitOk : warpspec::kExitUsage;
    }

    try {
        if (predict_cmd->parsed()) {
            std::cout << warpspec::render_prediction_table(pred_n, pred_a, pred_b);
            return warpspec::kExitOk;
        }
        if (compute_cmd->parsed()) {
            warpspec::RunConfig config = warpspec::load_config(flags.config_path);
            if (flags.p >= 0) config.p = flags.p;
            if (flags.kmax >= 0) config.kmax = flags.kmax;
            if (!flags.ladder.empty()) config.ladder = parse_ladder(flags.ladder);
            if (!flags.out.empty()) config.out_dir = flags.out;
            if (!flags.family.empty()) config.family = flags.family;
            config.validate();
            const warpspec::ComputeArtifacts artifacts = warpspec::run_compute(config);
            warpspec::write_artifacts(config, artifacts);
            std::cout << artifacts.report_json;
            return artifacts.exit_code;
        }
        if (verify_cmd->parsed()) {
            const warpspec::VerifyArtifacts artifacts =
                warpspec::run_verify(mutate, base_step, levels);
            std::cout << artifacts.jsonl;
            return artifacts.pass ? warpspec::kExitOk : warpspec::kExitComparisonFailure;
        }
    } catch (const warpspec::ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return warpspec::kExitUsage;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return warpspec::kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "solver error: " << err.what() << "\n";
        return warpspec::kExitSolverError;
    }
    return warpspec::kExitUsage;
}
