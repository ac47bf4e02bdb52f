#include "warpspec/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "warpspec/predictor.hpp"
#include "warpspec/sphere_modes.hpp"

namespace warpspec {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// run fn(i) for i in [0, n) on a small pool; exceptions surface in order
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
    const size_t workers = std::min<size_t>(std::max(1, worker_count()), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& err : errors)
        if (err) std::rethrow_exception(err);
}

const char* mechanism_name(Mechanism m) {
    switch (m) {
        case Mechanism::Lavine: return "Lavine";
        case Mechanism::EmptyEssential: return "EmptyEssential";
        default: return "AgmonKatoKuroda";
    }
}

std::string band_text(const Band& band) {
    if (band.empty) return "empty";
    return "[" + fmt(band.bottom) + ", inf)";
}

ordered_json band_json(const Band& band) {
    ordered_json j;
    j["empty"] = band.empty;
    if (!band.empty) j["bottom"] = band.bottom;
    return j;
}

std::string exponent_text(double q) {
    if (std::isinf(q)) return q > 0 ? "inf" : "-inf";
    return fmt(q);
}

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("WARP_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

ComputeArtifacts run_compute(const RunConfig& config) {
    config.validate();
    const bool type_two = config.family == "type2";
    const int tower_degree = type_two ? config.p - 1 : config.p;
    const std::vector<SphereMode> modes =
        coclosed_eigenvalues(config.N, tower_degree, config.kmax);
    if (modes.empty()) throw ConfigError("config: empty mode sweep for this family");

    const MetricProfile profile =
        build_profile({config.N, config.a, config.b, config.epsilon, config.c});
    const ArclengthMap map = arclength(profile);
    const PotentialKind kind = type_two ? PotentialKind::TypeII : PotentialKind::TypeI;

    std::vector<ReducedOperator> operators;
    operators.reserve(modes.size());
    for (const SphereMode& mode : modes) {
        auto v_t = type_two
                       ? potential_type2_general(profile, config.N, config.p, mode.lambda)
                       : potential_type1_general(profile, config.N, config.p, mode.lambda);
        operators.push_back(
            to_arclength(std::move(v_t), map, profile, kind, config.N, config.p, mode.lambda));
    }

    // flattened (mode, length) task pool with per-task error capture
    const size_t n_levels = config.ladder.size();
    std::vector<LevelSpectrum> level_results(modes.size() * n_levels);
    std::vector<std::string> task_errors(modes.size() * n_levels);
    parallel_for(level_results.size(), [&](size_t task) {
        const size_t mi = task / n_levels;
        const size_t li = task % n_levels;
        const GridPolicy fixed =
            ladder_policy(config.grid, operators[mi], config.ladder.front());
        try {
            level_results[task] =
                solve_level(operators[mi], config.ladder[li], fixed, config.cutoff);
        } catch (const std::exception& err) {
            task_errors[task] = err.what();
        }
    });

    bool solver_error = false;
    std::vector<SpectrumEstimate> estimates;
    std::vector<Band> mode_predictions;
    std::vector<std::string> mode_errors(modes.size());
    for (size_t mi = 0; mi < modes.size(); ++mi) {
        std::vector<LevelSpectrum> levels;
        std::string error;
        for (size_t li = 0; li < n_levels; ++li) {
            if (!task_errors[mi * n_levels + li].empty())
                error = task_errors[mi * n_levels + li];
            else
                levels.push_back(level_results[mi * n_levels + li]);
        }
        SpectrumEstimate est;
        if (error.empty() && levels.size() >= 2) {
            est = assemble_estimate(operators[mi], std::move(levels));
        } else {
            solver_error = true;
            mode_errors[mi] = error.empty() ? "insufficient ladder levels" : error;
        }
        estimates.push_back(std::move(est));
        mode_predictions.push_back(predict_mode(kind, config.N, config.p, config.a,
                                                config.b, modes[mi].lambda));
    }

    const ComparisonReport comparison =
        aggregate_modes(estimates, mode_predictions, config.tolerance);

    // CSV: one row per (mode, length)
    std::string csv = "mode_k,lambda,L,bottom,uncertainty,classification\n";
    for (size_t mi = 0; mi < modes.size(); ++mi) {
        std::optional<double> prev_min;
        for (const LevelSpectrum& level : estimates[mi].levels) {
            std::string bottom = "nan", unc = "0", cls = "unclassified";
            if (level.band_min) {
                bottom = fmt(*level.band_min);
                if (prev_min) unc = fmt(std::abs(*level.band_min - *prev_min));
                prev_min = level.band_min;
                cls = "band";
            } else if (!level.classes.empty() &&
                       level.classes.front() != StateClass::Unclassified) {
                cls = "no-band";
            }
            csv += std::to_string(modes[mi].k) + "," + fmt(modes[mi].lambda) + "," +
                   fmt(level.length) + "," + bottom + "," + unc + "," + cls + "\n";
        }
    }

    const BandPrediction full = predict(config.N, config.p, config.a, config.b);
    const RegimeClass regime =
        classify_regime(config.N, config.p, config.a, config.b, modes.front().lambda);

    ordered_json report;
    report["params"] = {{"N", config.N},       {"p", config.p},
                        {"a", config.a},       {"b", config.b},
                        {"epsilon", config.epsilon}, {"c", config.c},
                        {"kmax", config.kmax}, {"family", config.family},
                        {"ladder", config.ladder},   {"cutoff", config.cutoff},
                        {"tolerance", config.tolerance}};
    report["predicted"]["ess"] = band_json(full.ess);
    report["predicted"]["ess"]["isolated_zero"] = full.ess_isolated_zero;
    report["predicted"]["ac"] = band_json(full.ac);
    report["predicted"]["sc"] =
        full.sc == ScStatus::Empty ? "empty" : "reduces_to_M3_open";
    report["predicted"]["tag"] = full.provenance;
    report["numeric"]["bottom"] = comparison.numeric_union_bottom
                                      ? ordered_json(*comparison.numeric_union_bottom)
                                      : ordered_json(nullptr);
    double union_uncertainty = 0.0;
    for (const SpectrumEstimate& est : estimates)
        union_uncertainty = std::max(union_uncertainty, est.uncertainty);
    report["numeric"]["uncertainty"] = union_uncertainty;
    bool all_counts_stable = true;
    for (const SpectrumEstimate& est : estimates)
        all_counts_stable = all_counts_stable && est.count_stable;
    report["numeric"]["count_stable"] = all_counts_stable;
    report["regime"] = {{"mechanism", mechanism_name(regime.mechanism)},
                        {"decay_exponent", exponent_text(regime.decay_exponent)}};

    ordered_json mode_rows = ordered_json::array();
    for (size_t mi = 0; mi < modes.size(); ++mi) {
        const ModeComparison& row = comparison.modes[mi];
        ordered_json jm;
        jm["k"] = modes[mi].k;
        jm["lambda"] = modes[mi].lambda;
        jm["predicted"] = band_json(row.predicted);
        jm["bottom"] =
            row.numeric_bottom ? ordered_json(*row.numeric_bottom) : ordered_json(nullptr);
        jm["uncertainty"] = row.uncertainty;
        jm["count_stable"] = row.count_stable;
        jm["deviation"] = row.deviation;
        const RegimeClass mode_regime =
            classify_regime(config.N, config.p, config.a, config.b, modes[mi].lambda);
        jm["regime"] = mechanism_name(mode_regime.mechanism);
        jm["pass"] = row.pass;
        if (!mode_errors[mi].empty()) jm["error"] = mode_errors[mi];
        mode_rows.push_back(jm);
    }
    report["modes"] = mode_rows;

    ComputeArtifacts artifacts;
    if (solver_error)
        artifacts.exit_code = kExitSolverError;
    else if (!comparison.pass)
        artifacts.exit_code = kExitComparisonFailure;
    report["verdict"] = artifacts.exit_code == kExitOk
                            ? "pass"
                            : (solver_error ? "solver-error" : "comparison-failure");
    artifacts.csv = std::move(csv);
    artifacts.report_json = report.dump(2) + "\n";
    return artifacts;
}

void write_artifacts(const RunConfig& config, const ComputeArtifacts& artifacts) {
    std::filesystem::create_directories(config.out_dir);
    std::ofstream csv(std::filesystem::path(config.out_dir) / "modes.csv",
                      std::ios::binary);
    csv << artifacts.csv;
    std::ofstream report(std::filesystem::path(config.out_dir) / "report.json",
                         std::ios::binary);
    report << artifacts.report_json;
    if (!csv || !report)
        throw std::runtime_error("write_artifacts: cannot write under " + config.out_dir);
}

std::string render_prediction_table(int N, double a, double b) {
    std::string out = "p\tsigma_ess\tsigma_ac\tsigma_sc\ttag\n";
    for (int p = 0; p <= N; ++p) {
        const BandPrediction pred = predict(N, p, a, b);
        std::string ess = band_text(pred.ess);
        if (pred.ess_isolated_zero) ess = "{0} u " + ess;
        const std::string sc =
            pred.sc == ScStatus::Empty ? "empty" : "reduces_to_M3_open";
        out += std::to_string(p) + "\t" + ess + "\t" + band_text(pred.ac) + "\t" + sc +
               "\t" + pred.provenance + "\n";
    }
    return out;
}

VerifyArtifacts run_verify(bool mutate, double base_step, int levels) {
    const MetricProfile profile = build_profile({3, -2.0, -1.0, 1.0, 2.0});
    const VerifierReport report = run_verifier_suite(
        profile, base_step, levels, mutate ? Mutation::SwapCouplings : Mutation::None);

    std::string jsonl;
    for (const ResidualRow& row : report.rows) {
        ordered_json j;
        j["check"] = row.check;
        j["params"] = {{"N", row.N}, {"p", row.p}, {"lambda", row.lambda}};
        j["step"] = row.step;
        j["residual"] = row.residual;
        jsonl += j.dump() + "\n";
    }
    return {std::move(jsonl), report.pass};
}

}  // namespace warpspec
