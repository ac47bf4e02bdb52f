#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "warpspec/verifier.hpp"

using namespace warpspec;

namespace {
const WarpParams kSteep{3, -2.0, -1.0, 1.0, 2.0};  // f' != 0 beyond the bridge
}

TEST_CASE("reduction identities converge at 4th order") {
    const MetricProfile profile = build_profile(kSteep);
    const VerifierReport report = run_verifier_suite(profile, 0.02, 4);
    CHECK(report.pass);
    for (const auto& orders :
         {report.orders_type1, report.orders_type2, report.orders_type3}) {
        REQUIRE(orders.size() == 3);
        double mean = 0.0;
        for (double o : orders) mean += o / orders.size();
        CHECK(mean > 3.4);
    }
    // final-level residuals sit well below the potential-assembly tolerance
    for (const ResidualRow& row : report.rows)
        if (row.step < 0.003) CHECK(row.residual < 1e-6);
}

TEST_CASE("swapping the coupling weights is detected") {
    const MetricProfile profile = build_profile(kSteep);
    const VerifierReport report =
        run_verifier_suite(profile, 0.02, 3, Mutation::SwapCouplings);
    CHECK_FALSE(report.pass);
    // the mutated residual does not vanish under refinement
    double last = 0.0;
    for (const ResidualRow& row : report.rows)
        if (row.check == "type3") last = row.residual;
    CHECK(last > 1e-2);
}

TEST_CASE("the misprinted type II cross coefficient is detected") {
    const MetricProfile profile = build_profile(kSteep);
    const BumpProfile bump{0.5, 2.5, 6, 1.0};
    const double good = check_type2_reduction(profile, 3, 1, 2.0, bump, 0.005);
    const double bad =
        check_type2_reduction(profile, 3, 1, 2.0, bump, 0.005, Mutation::Type2CrossSign);
    CHECK(good < 1e-6);
    CHECK(bad > 1e-2);
}

TEST_CASE("residual is invariant under rescaling the bump") {
    const MetricProfile profile = build_profile(kSteep);
    BumpProfile bump{0.5, 2.5, 6, 1.0};
    const double base = check_type1_reduction(profile, 3, 1, 2.0, bump, 0.01);
    bump.amplitude = 37.5;
    const double scaled = check_type1_reduction(profile, 3, 1, 2.0, bump, 0.01);
    CHECK(std::abs(base - scaled) < 1e-12 * std::abs(base) + 1e-300);
}

TEST_CASE("euclidean-region bump keeps a small residual at fine steps") {
    const MetricProfile profile = build_profile({3, -1.0, -1.0, 1.0, 2.0});
    const BumpProfile bump{0.1, 0.5, 6, 1.0};
    CHECK(check_type1_reduction(profile, 3, 0, 0.0, bump, 1e-3) < 1e-6);
}

TEST_CASE("weighted norm identities") {
    const MetricProfile profile = build_profile(kSteep);
    const BumpProfile bump{0.5, 2.5, 6, 1.0};
    for (bool type_two : {false, true}) {
        const auto [weighted, flat] = norm_identity(profile, 3, 1, type_two, bump);
        CHECK(std::abs(weighted - flat) < 1e-12 * std::abs(flat));
    }
}

TEST_CASE("coarse grids are rejected") {
    const MetricProfile profile = build_profile(kSteep);
    const BumpProfile bump{0.5, 2.5, 6, 1.0};
    CHECK_THROWS_AS(check_type1_reduction(profile, 3, 0, 0.0, bump, 0.2),
                    std::invalid_argument);
}
