#pragma once

// Closed-form spectral predictions for the warped-product family, the
// perturbation-regime classifier, and the aggregation of per-mode numerical
// estimates into a comparison report.

#include <optional>
#include <string>
#include <vector>

#include "warpspec/eigensolver.hpp"

namespace warpspec {

// half-line [bottom, inf) or the empty set
struct Band {
    bool empty = true;
    double bottom = 0.0;

    static Band half_line(double bottom) { return {false, bottom}; }
    static Band none() { return {true, 0.0}; }
};

enum class ScStatus { Empty, ReducesToM3Open };

struct BandPrediction {
    Band ess;
    bool ess_isolated_zero = false;  // {0} component, only at p = N/2, a = -1, b < 0
    Band ac;
    ScStatus sc = ScStatus::Empty;
    std::string provenance;  // case tag
};

enum class Mechanism { AgmonKatoKuroda, Lavine, EmptyEssential };

struct RegimeClass {
    Mechanism mechanism = Mechanism::AgmonKatoKuroda;
    // power q of the slowest tail component ~ rho^{-q}; +inf for exponential
    // decay, -inf when the potential diverges (empty essential spectrum)
    double decay_exponent = 2.0;
};

// full-operator prediction on p-forms, 0 <= p <= N, a <= -1
BandPrediction predict(int N, int p, double a, double b);

// per-mode absolutely continuous band of a single reduced operator
Band predict_mode(PotentialKind kind, int N, int p, double a, double b, double lambda);

RegimeClass classify_regime(int N, int p, double a, double b, double lambda);

struct ModeComparison {
    double lambda = 0.0;
    Band predicted;
    std::optional<double> numeric_bottom;
    double uncertainty = 0.0;
    bool count_stable = false;
    bool band_found = false;
    double deviation = 0.0;  // |numeric - predicted| / max(1, predicted)
    bool pass = false;
};

struct ComparisonReport {
    std::vector<ModeComparison> modes;
    Band predicted_union;
    std::optional<double> numeric_union_bottom;
    double union_deviation = 0.0;
    bool pass = false;
};

// unions per-mode bands and checks each numeric estimate against its
// prediction at the given relative tolerance
ComparisonReport aggregate_modes(const std::vector<SpectrumEstimate>& estimates,
                                 const std::vector<Band>& predictions,
                                 double tolerance);

}  // namespace warpspec
