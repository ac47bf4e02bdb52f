#include "warpspec/predictor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "warpspec/sphere_modes.hpp"

namespace warpspec {

namespace {

bool edge_degree(int N, int p) { return p == 0 || p == 1 || p == N - 1 || p == N; }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

BandPrediction predict(int N, int p, double a, double b) {
    if (N < 2) throw std::invalid_argument("predict: N must be >= 2");
    if (p < 0 || p > N) throw std::invalid_argument("predict: p outside [0, N]");
    if (!(a <= -1.0)) throw std::invalid_argument("predict: a must be <= -1");

    BandPrediction out;
    out.sc = (p == 0 || p == N) ? ScStatus::Empty : ScStatus::ReducesToM3Open;
    const double m1 = 0.5 * (N - 2 * p - 1);
    const double m2 = 0.5 * (N - 2 * p + 1);

    if (a == -1.0) {
        if (b < 0.0) {
            const double bottom = std::min(m1 * m1, m2 * m2) * b * b;
            out.ac = Band::half_line(bottom);
            out.ess = Band::half_line(bottom);
            if (2 * p == N) {
                out.ess_isolated_zero = true;
                out.provenance = "case a=-1 b<0 p=N/2";
            } else {
                out.provenance = "case a=-1 b<0";
            }
        } else if (b == 0.0) {
            const double bottom = lambda_bar(N, p);
            out.ac = Band::half_line(bottom);
            out.ess = Band::half_line(bottom);
            out.provenance = "case a=-1 b=0";
        } else {
            if (edge_degree(N, p)) {
                const double bottom = 0.25 * (N - 1.0) * (N - 1.0) * b * b;
                out.ac = Band::half_line(bottom);
                out.ess = Band::half_line(bottom);
                out.provenance = "case a=-1 b>0 edge-p";
            } else {
                out.ac = Band::none();
                out.ess = Band::none();
                out.provenance = "case a=-1 b>0 interior-p";
            }
        }
        return out;
    }

    if (b < 0.0) {
        out.ac = Band::half_line(0.0);
        out.ess = Band::half_line(0.0);
        out.provenance = "case a<-1 b<0";
    } else if (b == 0.0) {
        const double bottom = lambda_bar(N, p);
        out.ac = Band::half_line(bottom);
        out.ess = Band::half_line(bottom);
        out.provenance = "case a<-1 b=0";
    } else {
        if (edge_degree(N, p)) {
            out.ac = Band::half_line(0.0);
            out.ess = Band::half_line(0.0);
            out.provenance = "case a<-1 b>0 edge-p";
        } else {
            out.ac = Band::none();
            out.ess = Band::none();
            out.provenance = "case a<-1 b>0 interior-p";
        }
    }
    return out;
}

Band predict_mode(PotentialKind kind, int N, int p, double a, double b, double lambda) {
    if (kind == PotentialKind::CouplingV3)
        throw std::invalid_argument("predict_mode: no closed form for the coupled system");
    if (!(a <= -1.0)) throw std::invalid_argument("predict_mode: a must be <= -1");
    const double m = (kind == PotentialKind::TypeI) ? 0.5 * (N - 2 * p - 1)
                                                    : 0.5 * (N - 2 * p + 1);
    if (b < 0.0) return Band::half_line(a == -1.0 ? m * m * b * b : 0.0);
    if (b == 0.0) return Band::half_line(lambda);
    if (lambda > 0.0) return Band::none();
    return Band::half_line(a == -1.0 ? m * m * b * b : 0.0);
}

RegimeClass classify_regime(int N, int p, double a, double b, double lambda) {
    if (N < 2 || p < 0 || p > N) throw std::invalid_argument("classify_regime: bad degree");
    if (!(a <= -1.0)) throw std::invalid_argument("classify_regime: a must be <= -1");
    if (lambda < 0.0) throw std::invalid_argument("classify_regime: lambda must be >= 0");

    if (b > 0.0 && lambda > 0.0) return {Mechanism::EmptyEssential, -kInf};
    if (a == -1.0) {
        // exponential tail for b != 0 with lambda > 0, inverse-square otherwise
        if (b != 0.0 && lambda > 0.0) return {Mechanism::AgmonKatoKuroda, kInf};
        return {Mechanism::AgmonKatoKuroda, 2.0};
    }
    const double alpha = std::abs(a + 1.0);
    if (b < 0.0 && lambda > 0.0) {
        const double q = 2.0 * std::abs(b) / alpha;
        if (q <= 1.0) return {Mechanism::Lavine, q};
        return {Mechanism::AgmonKatoKuroda, std::min(q, 2.0)};
    }
    return {Mechanism::AgmonKatoKuroda, 2.0};  // inverse-square tail
}

ComparisonReport aggregate_modes(const std::vector<SpectrumEstimate>& estimates,
                                 const std::vector<Band>& predictions,
                                 double tolerance) {
    if (estimates.empty()) throw std::invalid_argument("aggregate_modes: empty mode set");
    if (estimates.size() != predictions.size())
        throw std::invalid_argument("aggregate_modes: estimate/prediction size mismatch");

    ComparisonReport report;
    report.predicted_union = Band::none();
    bool all_pass = true;
    for (size_t i = 0; i < estimates.size(); ++i) {
        const SpectrumEstimate& est = estimates[i];
        const Band& pred = predictions[i];
        ModeComparison row;
        row.predicted = pred;
        row.numeric_bottom = est.bottom;
        row.uncertainty = est.uncertainty;
        row.count_stable = est.count_stable;
        row.band_found = est.band_found;
        if (pred.empty) {
            // empty band: the eigenvalue count must stabilize instead
            row.pass = est.count_stable && !est.band_found;
        } else if (est.bottom) {
            row.deviation = std::abs(*est.bottom - pred.bottom) / std::max(1.0, pred.bottom);
            row.pass = row.deviation <= tolerance;
            if (report.predicted_union.empty || pred.bottom < report.predicted_union.bottom)
                report.predicted_union = pred;
            if (!report.numeric_union_bottom || *est.bottom < *report.numeric_union_bottom)
                report.numeric_union_bottom = est.bottom;
        } else {
            row.pass = false;
        }
        all_pass = all_pass && row.pass;
        report.modes.push_back(row);
    }
    if (!report.predicted_union.empty && report.numeric_union_bottom) {
        report.union_deviation = std::abs(*report.numeric_union_bottom -
                                          report.predicted_union.bottom) /
                                 std::max(1.0, report.predicted_union.bottom);
        all_pass = all_pass && report.union_deviation <= tolerance;
    }
    report.pass = all_pass;
    return report;
}

}  // namespace warpspec
