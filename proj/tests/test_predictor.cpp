#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "warpspec/predictor.hpp"

using namespace warpspec;

TEST_CASE("middle degree at a = -1, b < 0 keeps the isolated zero") {
    const BandPrediction pred = predict(4, 2, -1.0, -1.0);
    CHECK(pred.ess_isolated_zero);
    CHECK_FALSE(pred.ess.empty);
    CHECK(pred.ess.bottom == doctest::Approx(0.25));
    CHECK(pred.ac.bottom == doctest::Approx(0.25));
    CHECK(pred.sc == ScStatus::ReducesToM3Open);
}

TEST_CASE("edge degrees survive b > 0 at a = -1") {
    const BandPrediction pred = predict(3, 1, -1.0, 2.0);
    CHECK_FALSE(pred.ac.empty);
    CHECK(pred.ac.bottom == doctest::Approx(4.0));  // ((N-1)/2)^2 b^2
    CHECK_FALSE(pred.ess_isolated_zero);
}

TEST_CASE("interior degrees die for b > 0") {
    const BandPrediction shallow = predict(5, 2, -2.0, 1.0);
    CHECK(shallow.ac.empty);
    CHECK(shallow.ess.empty);
    const BandPrediction steep = predict(5, 2, -1.0, 1.0);
    CHECK(steep.ac.empty);
}

TEST_CASE("a = -1, b < 0 takes the smaller of the two half-integer weights") {
    const BandPrediction pred = predict(3, 1, -1.0, -1.0);
    // min{((N-2p-1)/2)^2, ((N-2p+1)/2)^2} b^2 = min{0, 1} = 0
    CHECK(pred.ac.bottom == doctest::Approx(0.0));
    CHECK_FALSE(pred.ess_isolated_zero);
}

TEST_CASE("b = 0 bands start at the sphere minimum") {
    CHECK(predict(3, 0, -1.0, 0.0).ac.bottom == doctest::Approx(0.0));
    CHECK(predict(5, 2, -1.5, 0.0).ac.bottom == doctest::Approx(4.0));
    CHECK(predict(3, 1, -1.0, 0.0).ac.bottom == doctest::Approx(0.0));
}

TEST_CASE("a < -1 cases") {
    CHECK(predict(4, 1, -2.0, -0.7).ac.bottom == doctest::Approx(0.0));
    CHECK(predict(4, 1, -2.0, 0.7).ac.bottom == doctest::Approx(0.0));
    CHECK(predict(4, 0, -2.0, 0.7).ess.bottom == doctest::Approx(0.0));
}

TEST_CASE("sc status reduces to the coupled block except at the scalar edges") {
    CHECK(predict(3, 0, -1.0, -1.0).sc == ScStatus::Empty);
    CHECK(predict(3, 3, -1.0, -1.0).sc == ScStatus::Empty);
    CHECK(predict(3, 2, -1.0, -1.0).sc == ScStatus::ReducesToM3Open);
}

TEST_CASE("predict validates its domain") {
    CHECK_THROWS_AS(predict(3, 4, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(predict(3, -1, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(predict(3, 1, -0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(predict(1, 0, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("duality p <-> N-p over a parameter sweep") {
    for (int N = 2; N <= 8; ++N)
        for (int p = 0; p <= N; ++p)
            for (double a : {-1.0, -1.6, -3.0})
                for (double b : {-1.3, -0.5, 0.0, 0.7, 2.0}) {
                    const BandPrediction left = predict(N, p, a, b);
                    const BandPrediction right = predict(N, N - p, a, b);
                    REQUIRE(left.ess.empty == right.ess.empty);
                    REQUIRE(left.ac.empty == right.ac.empty);
                    REQUIRE(left.ess_isolated_zero == right.ess_isolated_zero);
                    if (!left.ess.empty) REQUIRE(left.ess.bottom == right.ess.bottom);
                    if (!left.ac.empty) REQUIRE(left.ac.bottom == right.ac.bottom);
                }
}

TEST_CASE("ac band is contained in the essential band") {
    for (int N = 2; N <= 7; ++N)
        for (int p = 0; p <= N; ++p)
            for (double a : {-1.0, -2.0})
                for (double b : {-1.0, 0.0, 1.0}) {
                    const BandPrediction pred = predict(N, p, a, b);
                    if (!pred.ac.empty) {
                        REQUIRE_FALSE(pred.ess.empty);
                        REQUIRE(pred.ac.bottom >= pred.ess.bottom);
                        REQUIRE(pred.ess.bottom >= 0.0);
                    }
                }
}

TEST_CASE("per-mode bands") {
    CHECK(predict_mode(PotentialKind::TypeI, 3, 0, -1.0, -1.0, 5.0).bottom ==
          doctest::Approx(1.0));
    CHECK(predict_mode(PotentialKind::TypeI, 3, 0, -1.0, 0.0, 2.0).bottom ==
          doctest::Approx(2.0));
    CHECK(predict_mode(PotentialKind::TypeI, 3, 0, -1.0, 1.0, 2.0).empty);
    CHECK(predict_mode(PotentialKind::TypeI, 3, 0, -2.0, -1.0, 2.0).bottom ==
          doctest::Approx(0.0));
    CHECK(predict_mode(PotentialKind::TypeII, 3, 1, -1.0, -1.0, 0.0).bottom ==
          doctest::Approx(1.0));
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(3, 0, -1.0, -1.0, 2.0).mechanism == Mechanism::AgmonKatoKuroda);
    CHECK(std::isinf(classify_regime(3, 0, -1.0, -1.0, 2.0).decay_exponent));
    const RegimeClass lavine = classify_regime(3, 0, -2.0, -0.4, 2.0);
    CHECK(lavine.mechanism == Mechanism::Lavine);
    CHECK(lavine.decay_exponent == doctest::Approx(0.8));
    CHECK(classify_regime(3, 0, -2.0, 1.0, 2.0).mechanism == Mechanism::EmptyEssential);
    CHECK(classify_regime(3, 0, -2.0, -0.8, 2.0).mechanism == Mechanism::AgmonKatoKuroda);
    CHECK(classify_regime(3, 0, -2.0, -0.4, 0.0).mechanism == Mechanism::AgmonKatoKuroda);
    CHECK(classify_regime(3, 0, -1.0, 0.0, 2.0).decay_exponent == doctest::Approx(2.0));
}

TEST_CASE("lavine only occurs in the slow-decay corner") {
    for (double a : {-1.0, -1.5, -2.5})
        for (double b : {-2.0, -0.6, -0.1, 0.0, 0.5})
            for (double lambda : {0.0, 3.0}) {
                const RegimeClass cls = classify_regime(4, 1, a, b, lambda);
                if (cls.mechanism == Mechanism::Lavine) {
                    REQUIRE(a < -1.0);
                    REQUIRE(b < 0.0);
                    REQUIRE(std::abs(b) <= std::abs(a + 1.0) / 2.0 + 1e-15);
                }
            }
}

namespace {

SpectrumEstimate fake_estimate(double bottom, double uncertainty) {
    SpectrumEstimate est;
    est.levels.resize(2);
    est.bottom = bottom;
    est.uncertainty = uncertainty;
    est.band_found = true;
    return est;
}

}  // namespace

TEST_CASE("aggregation unions the half-lines") {
    std::vector<SpectrumEstimate> estimates = {fake_estimate(0.01, 0.001),
                                               fake_estimate(2.02, 0.01),
                                               fake_estimate(6.05, 0.02)};
    std::vector<Band> predictions = {Band::half_line(0.0), Band::half_line(2.0),
                                     Band::half_line(6.0)};
    const ComparisonReport report = aggregate_modes(estimates, predictions, 0.05);
    CHECK(report.pass);
    CHECK(report.predicted_union.bottom == doctest::Approx(0.0));
    CHECK(*report.numeric_union_bottom == doctest::Approx(0.01));
    CHECK(report.modes[1].deviation == doctest::Approx(0.01));

    // nested half-lines collapse to the smallest bottom
    predictions = {Band::half_line(1.0), Band::half_line(1.0), Band::half_line(1.0)};
    estimates = {fake_estimate(1.0, 0.0), fake_estimate(1.001, 0.0),
                 fake_estimate(1.002, 0.0)};
    CHECK(aggregate_modes(estimates, predictions, 0.05).predicted_union.bottom ==
          doctest::Approx(1.0));
}

TEST_CASE("aggregation rejects an empty mode set") {
    CHECK_THROWS_AS(aggregate_modes({}, {}, 0.05), std::invalid_argument);
}

TEST_CASE("full-degree thresholds from the two families") {
    // N=3, p=1, a=-1, b=-1: type I gives 0, type II gives 1, the union starts at 0
    const Band one = predict_mode(PotentialKind::TypeI, 3, 1, -1.0, -1.0, 2.0);
    const Band two = predict_mode(PotentialKind::TypeII, 3, 1, -1.0, -1.0, 0.0);
    CHECK(one.bottom == doctest::Approx(0.0));
    CHECK(two.bottom == doctest::Approx(1.0));
    CHECK(predict(3, 1, -1.0, -1.0).ac.bottom ==
          doctest::Approx(std::min(one.bottom, two.bottom)));
}
