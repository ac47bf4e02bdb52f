#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "warpspec/sphere_modes.hpp"

using namespace warpspec;

TEST_CASE("scalar tower") {
    const auto modes = coclosed_eigenvalues(3, 0, 3);
    REQUIRE(modes.size() == 4);
    CHECK(modes[0].lambda == 0.0);
    CHECK(modes[1].lambda == 2.0);
    CHECK(modes[2].lambda == 6.0);
    CHECK(modes[3].lambda == 12.0);
}

TEST_CASE("coexact tower closed form") {
    const auto modes = coclosed_eigenvalues(5, 2, 3);
    REQUIRE(modes.size() == 3);
    CHECK(modes[0].lambda == 6.0);  // (1+2)(1+5-2-2)
    CHECK(modes[0].k == 1);
    CHECK(modes[1].lambda == 12.0);
}

TEST_CASE("zero eigenvalue appears only in degrees 0 and N-1") {
    for (int N = 2; N <= 8; ++N)
        for (int p = 0; p <= N - 1; ++p) {
            const auto modes = coclosed_eigenvalues(N, p, 4);
            const bool has_zero =
                std::any_of(modes.begin(), modes.end(),
                            [](const SphereMode& m) { return m.lambda == 0.0; });
            CHECK(has_zero == (p == 0 || p == N - 1));
        }
}

TEST_CASE("lambda strictly increasing in k") {
    for (int N = 2; N <= 8; ++N)
        for (int p = 0; p <= N - 1; ++p) {
            const auto modes = coclosed_eigenvalues(N, p, 6);
            for (size_t i = 1; i < modes.size(); ++i)
                REQUIRE(modes[i].lambda > modes[i - 1].lambda);
        }
}

TEST_CASE("degree out of range") {
    CHECK_THROWS_AS(coclosed_eigenvalues(3, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(coclosed_eigenvalues(3, -1, 2), std::invalid_argument);
}

namespace {

std::vector<double> lambdas(int N, int p, int k_max, bool positive_only = false) {
    std::vector<double> out;
    for (const SphereMode& m : coclosed_eigenvalues(N, p, k_max))
        if (!positive_only || m.lambda > 0.0) out.push_back(m.lambda);
    std::sort(out.begin(), out.end());
    return out;
}

// spectrum of the full Laplacian on p-forms, assembled from the towers
std::vector<double> full_spectrum(int N, int p, int k_max) {
    std::vector<double> out = lambdas(N, p, k_max);
    if (p >= 1 && p <= N - 2) {
        const std::vector<double> exact = lambdas(N, p - 1, k_max, true);
        out.insert(out.end(), exact.begin(), exact.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// keep only entries that are certainly complete in every truncated tower
std::vector<double> clip(const std::vector<double>& v, double bound) {
    std::vector<double> out;
    for (double x : v)
        if (x <= bound) out.push_back(x);
    return out;
}

}  // namespace

TEST_CASE("coexact towers coincide under p <-> N-2-p, termwise") {
    for (int N = 3; N <= 8; ++N)
        for (int p = 0; p <= N - 2; ++p) {
            const auto left = lambdas(N, p, 8, true);
            const auto right = lambdas(N, N - 2 - p, 8, true);
            REQUIRE(left.size() == right.size());
            for (size_t i = 0; i < left.size(); ++i) REQUIRE(left[i] == right[i]);
        }
}

TEST_CASE("degrees 0 and N-1 mirror each other") {
    for (int N = 2; N <= 8; ++N) {
        const auto left = lambdas(N, 0, 8);
        const auto right = lambdas(N, N - 1, 8);
        REQUIRE(left == right);
    }
}

TEST_CASE("full form spectra coincide under p <-> N-1-p") {
    for (int N = 3; N <= 8; ++N)
        for (int p = 0; p <= N - 1; ++p) {
            // values below the 6th scalar level are complete with k_max = 12
            const double bound = 6.0 * (6.0 + N - 2.0);
            const auto left = clip(full_spectrum(N, p, 12), bound);
            const auto right = clip(full_spectrum(N, N - 1 - p, 12), bound);
            REQUIRE(left == right);
        }
}

TEST_CASE("lowest full eigenvalue and lambda_bar") {
    CHECK(lowest_form_eigenvalue(3, 0) == 0.0);
    CHECK(lowest_form_eigenvalue(3, 1) == 2.0);   // min{2*2, 1*2} on S^2
    CHECK(lowest_form_eigenvalue(5, 2) == 6.0);   // min{3*2, 2*3}
    CHECK(lambda_bar(3, 0) == 0.0);
    CHECK(lambda_bar(3, 1) == 0.0);  // constants enter through degree 0
    CHECK(lambda_bar(5, 2) == doctest::Approx(4.0));  // min{low(1)=4, low(2)=6}
    CHECK(lambda_bar(4, 4) == 0.0);  // top degree sees the volume form
}

namespace {

// independent oracle: finite-volume Laplace-Beltrami on S^2 over a
// latitude-longitude grid, symmetrized by the cell-area weights
std::vector<double> s2_laplacian_eigenvalues(int n_theta, int n_phi, int count) {
    const int n = n_theta * n_phi;
    const double h_t = M_PI / n_theta;
    const double h_p = 2.0 * M_PI / n_phi;
    auto theta = [&](int i) { return (i + 0.5) * h_t; };
    auto idx = [&](int i, int j) { return i * n_phi + ((j % n_phi + n_phi) % n_phi); };

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n_theta; ++i) {
        const double si = std::sin(theta(i));
        const double s_up = (i + 1 < n_theta) ? std::sin(theta(i) + 0.5 * h_t) : 0.0;
        const double s_dn = (i > 0) ? std::sin(theta(i) - 0.5 * h_t) : 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const int me = idx(i, j);
            double diag = (s_up + s_dn) / (si * h_t * h_t);
            if (i + 1 < n_theta) A(me, idx(i + 1, j)) -= s_up / (si * h_t * h_t);
            if (i > 0) A(me, idx(i - 1, j)) -= s_dn / (si * h_t * h_t);
            diag += 2.0 / (si * si * h_p * h_p);
            A(me, idx(i, j + 1)) -= 1.0 / (si * si * h_p * h_p);
            A(me, idx(i, j - 1)) -= 1.0 / (si * si * h_p * h_p);
            A(me, me) = diag;
        }
    }
    // symmetrize with D^{1/2}, D = cell areas sin(theta) h_t h_p
    Eigen::VectorXd w(n);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j)
            w(idx(i, j)) = std::sqrt(std::sin(theta(i)) * h_t * h_p);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) S(r, c) = w(r) * A(r, c) / w(c);
    S = 0.5 * (S + S.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
    std::vector<double> eigs(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + count);
    return eigs;
}

}  // namespace

TEST_CASE("scalar tower against the S^2 finite-volume oracle") {
    // 42 x 61 = 2562 nodes
    const std::vector<double> eigs = s2_laplacian_eigenvalues(42, 61, 9);
    CHECK(std::abs(eigs[0]) < 1e-8);  // constants
    const auto modes = coclosed_eigenvalues(3, 0, 2);
    for (int i = 1; i <= 3; ++i)  // lowest nonzero level, multiplicity 3
        CHECK(std::abs(eigs[i] - modes[1].lambda) / modes[1].lambda < 0.02);
    for (int i = 4; i <= 8; ++i)  // second level, multiplicity 5
        CHECK(std::abs(eigs[i] - modes[2].lambda) / modes[2].lambda < 0.02);
}
