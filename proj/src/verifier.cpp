#include "warpspec/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "warpspec/reduction.hpp"

namespace warpspec {

Deriv2 BumpProfile::eval(double t) const {
    const double sigma = 2.0 / (t1 - t0);
    const double s = (2.0 * t - (t0 + t1)) / (t1 - t0);
    if (std::abs(s) >= 1.0) return {0.0, 0.0, 0.0};
    const double m = exponent;
    const double q = 1.0 - s * s;
    const double v = amplitude * std::pow(q, m);
    const double d1 = amplitude * m * std::pow(q, m - 1) * (-2.0 * s) * sigma;
    const double d2 = amplitude *
                      (m * (m - 1) * std::pow(q, m - 2) * 4.0 * s * s -
                       2.0 * m * std::pow(q, m - 1)) *
                      sigma * sigma;
    return {v, d1, d2};
}

namespace {

// 5-point 4th-order first derivative; two nodes at each end are left zero,
// which is exact because the grid extends past the bump support
std::vector<double> fd4(const std::vector<double>& u, double h) {
    std::vector<double> d(u.size(), 0.0);
    for (size_t i = 2; i + 2 < u.size(); ++i)
        d[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
    return d;
}

struct CheckGrid {
    std::vector<double> t;
    double h;
};

CheckGrid make_grid(const BumpProfile& bump, double step) {
    const double margin = 6.0 * step;
    if (bump.t0 - margin <= 0.0)
        throw std::invalid_argument("verifier: bump support too close to t = 0 for this step");
    if ((bump.t1 - bump.t0) / step < 16.0)
        throw std::invalid_argument("verifier: grid too coarse, bump support under 16 nodes");
    CheckGrid grid;
    grid.h = step;
    for (double t = bump.t0 - margin; t <= bump.t1 + margin + 0.5 * step; t += step)
        grid.t.push_back(t);
    return grid;
}

double relative_max_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        num = std::max(num, std::abs(x[i] - y[i]));
        den = std::max(den, std::abs(y[i]));
    }
    return num / den;
}

}  // namespace

double check_type1_reduction(const MetricProfile& profile, int N, int p, double lambda,
                             const BumpProfile& bump, double grid_step) {
    const CheckGrid grid = make_grid(bump, grid_step);
    const size_t n = grid.t.size();
    const double gamma = 0.5 * (N - 1 - 2 * p);

    std::vector<double> fv(n), gv(n), hb(n), hb1(n), mu(n);
    for (size_t i = 0; i < n; ++i) {
        const Deriv2 f = profile.f(grid.t[i]);
        const Deriv2 g = profile.g(grid.t[i]);
        const Deriv2 h = bump.eval(grid.t[i]);
        fv[i] = f.value;
        gv[i] = g.value;
        hb[i] = h.value;
        hb1[i] = h.d1;
        mu[i] = std::pow(f.value, 0.25) * std::pow(g.value, 0.5 * gamma);
    }

    // fiber route: lambda/g h - f^{-1/2} g^{-gamma} d/dt (f^{-1/2} g^{gamma} h')
    std::vector<double> inner(n);
    for (size_t i = 0; i < n; ++i)
        inner[i] = std::pow(gv[i], gamma) / std::sqrt(fv[i]) * hb1[i];
    const std::vector<double> d_inner = fd4(inner, grid.h);
    std::vector<double> lhs(n);
    for (size_t i = 0; i < n; ++i) {
        const double fiber = lambda / gv[i] * hb[i] -
                             std::pow(gv[i], -gamma) / std::sqrt(fv[i]) * d_inner[i];
        lhs[i] = mu[i] * fiber;
    }

    // flat-weight route: -d/dt (1/f dw/dt) + bracket * w, nested differences
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = mu[i] * hb[i];
    const std::vector<double> dw = fd4(w, grid.h);
    std::vector<double> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = dw[i] / fv[i];
    const std::vector<double> dz = fd4(z, grid.h);
    std::vector<double> rhs(n);
    for (size_t i = 0; i < n; ++i)
        rhs[i] = -dz[i] +
                 type1_terms(profile.f(grid.t[i]), profile.g(grid.t[i]), N, p, lambda) * w[i];

    return relative_max_diff(lhs, rhs);
}

namespace {

// type II bracket with the cross-term sign flipped to the variant that the
// mismatch test must reject
double type2_terms_mutated(const Deriv2& f, const Deriv2& g, int N, int p, double lambda) {
    const double F = f.d1 / f.value;
    const double G = g.d1 / g.value;
    const double c_sq = (N - 2.0 * p + 1.0) / 4.0 * ((N - 2.0 * p + 5.0) / 4.0);
    const double c_dd = (-N + 2.0 * p - 1.0) / 4.0;
    const double c_cross = (N - 1.0 + 2.0 * p) / 4.0;
    return -7.0 / 16.0 * F * F / f.value + 0.25 * f.d2 / (f.value * f.value)
           - 0.5 * (f.d1 / (f.value * f.value)) * c_cross * G
           + (c_sq * G * G + c_dd * g.d2 / g.value) / f.value + lambda / g.value;
}

}  // namespace

double check_type2_reduction(const MetricProfile& profile, int N, int p, double lambda,
                             const BumpProfile& bump, double grid_step, Mutation mutation) {
    const CheckGrid grid = make_grid(bump, grid_step);
    const size_t n = grid.t.size();
    const double beta = 0.5 * (N + 1 - 2 * p);

    std::vector<double> fv(n), gv(n), hb(n), mu(n);
    for (size_t i = 0; i < n; ++i) {
        const Deriv2 f = profile.f(grid.t[i]);
        const Deriv2 g = profile.g(grid.t[i]);
        fv[i] = f.value;
        gv[i] = g.value;
        hb[i] = bump.eval(grid.t[i]).value;
        mu[i] = std::pow(f.value, -0.25) * std::pow(g.value, 0.5 * beta);
    }

    // fiber route: lambda/g h - d/dt { f^{-1/2} g^{-beta} d/dt (f^{-1/2} g^{beta} h) }
    std::vector<double> inner(n);
    for (size_t i = 0; i < n; ++i)
        inner[i] = std::pow(gv[i], beta) / std::sqrt(fv[i]) * hb[i];
    const std::vector<double> d1v = fd4(inner, grid.h);
    std::vector<double> mid(n);
    for (size_t i = 0; i < n; ++i)
        mid[i] = std::pow(gv[i], -beta) / std::sqrt(fv[i]) * d1v[i];
    const std::vector<double> d2v = fd4(mid, grid.h);
    std::vector<double> lhs(n);
    for (size_t i = 0; i < n; ++i)
        lhs[i] = mu[i] * (lambda / gv[i] * hb[i] - d2v[i]);

    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = mu[i] * hb[i];
    const std::vector<double> dw = fd4(w, grid.h);
    std::vector<double> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = dw[i] / fv[i];
    const std::vector<double> dz = fd4(z, grid.h);
    std::vector<double> rhs(n);
    for (size_t i = 0; i < n; ++i) {
        const Deriv2 f = profile.f(grid.t[i]);
        const Deriv2 g = profile.g(grid.t[i]);
        const double bracket = (mutation == Mutation::Type2CrossSign)
                                   ? type2_terms_mutated(f, g, N, p, lambda)
                                   : type2_terms(f, g, N, p, lambda);
        rhs[i] = -dz[i] + bracket * w[i];
    }

    return relative_max_diff(lhs, rhs);
}

double check_type3_reduction(const MetricProfile& profile, int N, int p, double lambda,
                             const BumpProfile& bump1, const BumpProfile& bump2,
                             double grid_step, Mutation mutation) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("check_type3_reduction: lambda must be > 0");
    // common grid covering both supports
    BumpProfile hull = bump1;
    hull.t0 = std::min(bump1.t0, bump2.t0);
    hull.t1 = std::max(bump1.t1, bump2.t1);
    const CheckGrid grid = make_grid(hull, grid_step);
    const size_t n = grid.t.size();
    const double gamma = 0.5 * (N - 1 - 2 * p);
    const double beta = 0.5 * (N + 1 - 2 * p);
    const double root = std::sqrt(lambda);

    std::vector<double> fv(n), gv(n), g1v(n), h1(n), h1d(n), h2(n), mu1(n), mu2(n);
    for (size_t i = 0; i < n; ++i) {
        const Deriv2 f = profile.f(grid.t[i]);
        const Deriv2 g = profile.g(grid.t[i]);
        fv[i] = f.value;
        gv[i] = g.value;
        g1v[i] = g.d1;
        const Deriv2 b1 = bump1.eval(grid.t[i]);
        h1[i] = b1.value;
        h1d[i] = b1.d1;
        h2[i] = bump2.eval(grid.t[i]).value;
        mu1[i] = std::pow(f.value, 0.25) * std::pow(g.value, 0.5 * gamma);
        mu2[i] = std::pow(f.value, -0.25) * std::pow(g.value, 0.5 * beta);
    }

    // fiber route, first component: type-I action on h1 plus (1/(fg)) g' sqrt(l) h2
    std::vector<double> inner1(n);
    for (size_t i = 0; i < n; ++i)
        inner1[i] = std::pow(gv[i], gamma) / std::sqrt(fv[i]) * h1d[i];
    const std::vector<double> d_inner1 = fd4(inner1, grid.h);
    // fiber route, second component: type-II action on h2 plus (1/g^2) g' sqrt(l) h1
    std::vector<double> inner2(n);
    for (size_t i = 0; i < n; ++i)
        inner2[i] = std::pow(gv[i], beta) / std::sqrt(fv[i]) * h2[i];
    const std::vector<double> d1v = fd4(inner2, grid.h);
    std::vector<double> mid2(n);
    for (size_t i = 0; i < n; ++i)
        mid2[i] = std::pow(gv[i], -beta) / std::sqrt(fv[i]) * d1v[i];
    const std::vector<double> d2v = fd4(mid2, grid.h);

    std::vector<double> lhs1(n), lhs2(n);
    for (size_t i = 0; i < n; ++i) {
        double couple1 = g1v[i] / (fv[i] * gv[i]) * root * h2[i];
        double couple2 = g1v[i] / (gv[i] * gv[i]) * root * h1[i];
        if (mutation == Mutation::SwapCouplings) std::swap(couple1, couple2);
        const double fiber1 = lambda / gv[i] * h1[i] -
                              std::pow(gv[i], -gamma) / std::sqrt(fv[i]) * d_inner1[i] +
                              couple1;
        const double fiber2 = lambda / gv[i] * h2[i] - d2v[i] + couple2;
        lhs1[i] = mu1[i] * fiber1;
        lhs2[i] = mu2[i] * fiber2;
    }

    // flat-weight route with the symmetric coupling g^{-3/2} f^{-1/2} g' sqrt(l)
    std::vector<double> w1(n), w2(n);
    for (size_t i = 0; i < n; ++i) {
        w1[i] = mu1[i] * h1[i];
        w2[i] = mu2[i] * h2[i];
    }
    const std::vector<double> dw1 = fd4(w1, grid.h);
    const std::vector<double> dw2 = fd4(w2, grid.h);
    std::vector<double> z1(n), z2(n);
    for (size_t i = 0; i < n; ++i) {
        z1[i] = dw1[i] / fv[i];
        z2[i] = dw2[i] / fv[i];
    }
    const std::vector<double> dz1 = fd4(z1, grid.h);
    const std::vector<double> dz2 = fd4(z2, grid.h);
    std::vector<double> rhs1(n), rhs2(n);
    for (size_t i = 0; i < n; ++i) {
        const Deriv2 f = profile.f(grid.t[i]);
        const Deriv2 g = profile.g(grid.t[i]);
        const double vc = coupling_term(f, g) * root;
        rhs1[i] = -dz1[i] + type1_terms(f, g, N, p, lambda) * w1[i] + vc * w2[i];
        rhs2[i] = -dz2[i] + type2_terms(f, g, N, p, lambda) * w2[i] + vc * w1[i];
    }

    return std::max(relative_max_diff(lhs1, rhs1), relative_max_diff(lhs2, rhs2));
}

std::pair<double, double> norm_identity(const MetricProfile& profile, int N, int p,
                                        bool type_two, const BumpProfile& bump) {
    const double expo = type_two ? 0.5 * (N + 1 - 2 * p) : 0.5 * (N - 2 * p - 1);
    const double fpow = type_two ? -0.5 : 0.5;
    auto weighted = [&](double t) {
        const double h = bump.eval(t).value;
        return std::pow(profile.g(t).value, expo) * std::pow(profile.f(t).value, fpow) * h * h;
    };
    auto flat = [&](double t) {
        const double mu = std::pow(profile.f(t).value, 0.5 * fpow) *
                          std::pow(profile.g(t).value, 0.5 * expo);
        const double w = mu * bump.eval(t).value;
        return w * w;
    };
    const double lhs = integrate(weighted, bump.t0, bump.t1, 1e-13);
    const double rhs = integrate(flat, bump.t0, bump.t1, 1e-13);
    return {lhs, rhs};
}

VerifierReport run_verifier_suite(const MetricProfile& profile, double base_step,
                                  int levels, Mutation mutation) {
    VerifierReport report;
    const int N = profile.params().dimension >= 3 ? profile.params().dimension : 3;
    const int p = 1;
    const double lambda = 2.0;

    // the metric is C^2 at eps and c, so each bump stays inside one smooth
    // region; together the three regions exercise every term of the brackets
    const double eps = profile.params().epsilon;
    const double c = profile.params().c;
    const double width = c - eps;
    const std::vector<std::pair<BumpProfile, BumpProfile>> region_bumps = {
        {{0.15 * eps, 0.95 * eps, 6, 1.0}, {0.25 * eps, 0.85 * eps, 6, 0.7}},
        {{eps + 0.03 * width, c - 0.03 * width, 6, 1.0},
         {eps + 0.10 * width, c - 0.10 * width, 6, 0.7}},
        {{c + 0.1, c + 2.1, 6, 1.0}, {c + 0.4, c + 2.4, 6, 0.7}}};

    std::vector<double> res1, res2, res3;
    for (int level = 0; level < levels; ++level) {
        const double step = base_step / std::pow(2.0, level);
        double r1 = 0.0, r2 = 0.0, r3 = 0.0;
        for (const auto& [bump1, bump2] : region_bumps) {
            r1 = std::max(r1, check_type1_reduction(profile, N, p, lambda, bump1, step));
            r2 = std::max(r2, check_type2_reduction(profile, N, p, lambda, bump1, step,
                                                    mutation == Mutation::Type2CrossSign
                                                        ? mutation
                                                        : Mutation::None));
            r3 = std::max(r3,
                          check_type3_reduction(profile, N, p, lambda, bump1, bump2, step,
                                                mutation == Mutation::SwapCouplings
                                                    ? mutation
                                                    : Mutation::None));
        }
        res1.push_back(r1);
        res2.push_back(r2);
        res3.push_back(r3);
        report.rows.push_back({"type1", N, p, lambda, step, r1});
        report.rows.push_back({"type2", N, p, lambda, step, r2});
        report.rows.push_back({"type3", N, p, lambda, step, r3});
    }

    auto orders = [](const std::vector<double>& res) {
        std::vector<double> out;
        for (size_t i = 0; i + 1 < res.size(); ++i)
            out.push_back(std::log2(res[i] / res[i + 1]));
        return out;
    };
    report.orders_type1 = orders(res1);
    report.orders_type2 = orders(res2);
    report.orders_type3 = orders(res3);

    auto gate = [](const std::vector<double>& ord, const std::vector<double>& res) {
        if (ord.empty()) return false;
        double mean = 0.0;
        for (double o : ord) mean += o;
        mean /= static_cast<double>(ord.size());
        return mean >= 3.4 && res.back() < 1e-6;
    };
    report.pass = gate(report.orders_type1, res1) && gate(report.orders_type2, res2) &&
                  gate(report.orders_type3, res3);
    return report;
}

}  // namespace warpspec
