#include "warpspec/reduction.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace warpspec {

PotentialSpec make_potential_spec(const ArclengthMap& map, PotentialKind kind,
                                  int N, int p, double lambda) {
    const WarpParams& wp = map.profile().params();
    if (p < 0 || p > N) throw std::invalid_argument("potential spec: p outside [0, N]");
    if (lambda < 0.0) throw std::invalid_argument("potential spec: lambda must be >= 0");

    PotentialSpec s;
    s.kind = kind;
    s.N = N;
    s.p = p;
    s.lambda = lambda;
    s.a = wp.a;
    s.b = wp.b;
    s.epsilon = wp.epsilon;
    s.regime = (wp.a == -1.0) ? Regime::AEqMinusOne : Regime::ALtMinusOne;
    const double m1 = 0.5 * (N - 2 * p - 1);
    const double m2 = 0.5 * (N - 2 * p + 1);
    s.threshold1 = m1 * m1 * wp.b * wp.b;
    s.threshold2 = m2 * m2 * wp.b * wp.b;
    s.c_bar = map.c_bar();
    s.c1 = map.c1();
    if (s.regime == Regime::ALtMinusOne) {
        const double alpha = std::abs(wp.a + 1.0);
        const double q = wp.b / alpha;
        s.K1_tilde = m1 * m1 * q * q + m1 * q;
        s.K2_tilde = m2 * m2 * q * q - m2 * q;
    }
    return s;
}

double type1_terms(const Deriv2& f, const Deriv2& g, int N, int p, double lambda) {
    const double F = f.d1 / f.value;
    const double G = g.d1 / g.value;
    const double c_sq = (N - 2.0 * p - 1.0) / 4.0 * ((N - 2.0 * p - 5.0) / 4.0);
    const double c_dd = (N - 2.0 * p - 1.0) / 4.0;
    const double c_cross = (N - 1.0 - 2.0 * p) / 4.0;
    return -7.0 / 16.0 * F * F / f.value + 0.25 * f.d2 / (f.value * f.value)
           - 0.5 * (f.d1 / (f.value * f.value)) * c_cross * G
           + (c_sq * G * G + c_dd * g.d2 / g.value) / f.value + lambda / g.value;
}

double type2_terms(const Deriv2& f, const Deriv2& g, int N, int p, double lambda) {
    const double F = f.d1 / f.value;
    const double G = g.d1 / g.value;
    const double c_sq = (N - 2.0 * p + 1.0) / 4.0 * ((N - 2.0 * p + 5.0) / 4.0);
    const double c_dd = (-N + 2.0 * p - 1.0) / 4.0;
    const double c_cross = (2.0 * p - N - 1.0) / 4.0;
    return -7.0 / 16.0 * F * F / f.value + 0.25 * f.d2 / (f.value * f.value)
           - 0.5 * (f.d1 / (f.value * f.value)) * c_cross * G
           + (c_sq * G * G + c_dd * g.d2 / g.value) / f.value + lambda / g.value;
}

double coupling_term(const Deriv2& f, const Deriv2& g) {
    return std::pow(g.value, -1.5) / std::sqrt(f.value) * g.d1;
}

double flat_weight_correction(const Deriv2& f) {
    const double F = f.d1 / f.value;
    return 7.0 / 16.0 * F * F / f.value - 0.25 * f.d2 / (f.value * f.value);
}

std::function<double(double)> potential_type1_general(const MetricProfile& profile,
                                                      int N, int p, double lambda) {
    return [profile, N, p, lambda](double t) {
        return type1_terms(profile.f(t), profile.g(t), N, p, lambda);
    };
}

std::function<double(double)> potential_type2_general(const MetricProfile& profile,
                                                      int N, int p, double lambda) {
    return [profile, N, p, lambda](double t) {
        return type2_terms(profile.f(t), profile.g(t), N, p, lambda);
    };
}

std::function<double(double)> coupling_v3(const MetricProfile& profile) {
    return [profile](double t) { return coupling_term(profile.f(t), profile.g(t)); };
}

std::optional<double> region_potential(const PotentialSpec& s, double r) {
    const double m1 = 0.5 * (s.N - 2 * s.p - 1);
    const double m2 = 0.5 * (s.N - 2 * s.p + 1);
    if (r < s.epsilon) {
        switch (s.kind) {
            case PotentialKind::TypeI:
                return (m1 * (m1 - 1.0) + s.lambda) / (r * r);
            case PotentialKind::TypeII:
                return (m2 * (m2 + 1.0) + s.lambda) / (r * r);
            case PotentialKind::CouplingV3:
                return 2.0 / (r * r);
        }
    }
    if (r > s.c_bar) {
        if (s.regime == Regime::AEqMinusOne) {
            switch (s.kind) {
                case PotentialKind::TypeI:
                    return s.threshold1 + s.lambda * std::exp(2.0 * s.b * r);
                case PotentialKind::TypeII:
                    return s.threshold2 + s.lambda * std::exp(2.0 * s.b * r);
                case PotentialKind::CouplingV3:
                    return -2.0 * s.b * std::exp(s.b * r);
            }
        }
        const double alpha = std::abs(s.a + 1.0);
        const double rho = r - *s.c1;
        const double q = s.b / alpha;
        switch (s.kind) {
            case PotentialKind::TypeI:
                return *s.K1_tilde / (rho * rho)
                       + s.lambda * std::pow(alpha, 2.0 * q) * std::pow(rho, 2.0 * q);
            case PotentialKind::TypeII:
                return *s.K2_tilde / (rho * rho)
                       + s.lambda * std::pow(alpha, 2.0 * q) * std::pow(rho, 2.0 * q);
            case PotentialKind::CouplingV3:
                return -2.0 * q * std::pow(alpha, q) * std::pow(rho, q - 1.0);
        }
    }
    return std::nullopt;
}

ReducedOperator::ReducedOperator(PotentialSpec spec, ArclengthMap map,
                                 std::function<double(double)> v_in_t)
    : spec_(spec), map_(std::move(map)), v_t_(std::move(v_in_t)) {}

ReducedOperator::ReducedOperator(PotentialSpec spec, ArclengthMap map,
                                 std::function<double(double)> v1_in_t,
                                 std::function<double(double)> v2_in_t,
                                 std::function<double(double)> v3_in_t)
    : spec_(spec),
      map_(std::move(map)),
      v_t_(std::move(v1_in_t)),
      v2_t_(std::move(v2_in_t)),
      v3_t_(std::move(v3_in_t)) {}

Deriv2 ReducedOperator::g_tilde(double r, double* t_out) const {
    const double t = map_.t_of_r(r);
    if (t_out) *t_out = t;
    const Deriv2 f = map_.profile().f(t);
    const Deriv2 g = map_.profile().g(t);
    // chain rule for d/dr = f^{-1/2} d/dt
    const double d1 = g.d1 / std::sqrt(f.value);
    const double d2 = g.d2 / f.value - g.d1 * f.d1 / (2.0 * f.value * f.value);
    return {g.value, d1, d2};
}

namespace {
const Deriv2 kFlat{1.0, 0.0, 0.0};
}

double ReducedOperator::potential_direct(double r) const {
    const Deriv2 gt = g_tilde(r, nullptr);
    if (spec_.kind == PotentialKind::TypeII)
        return type2_terms(kFlat, gt, spec_.N, spec_.p, spec_.lambda);
    return type1_terms(kFlat, gt, spec_.N, spec_.p, spec_.lambda);
}

double ReducedOperator::potential_via_t(double r) const {
    const double t = map_.t_of_r(r);
    return v_t_(t) + flat_weight_correction(map_.profile().f(t));
}

double ReducedOperator::potential_first(double r) const {
    if (spec_.kind != PotentialKind::CouplingV3)
        throw std::logic_error("potential_first: operator is not coupled");
    const Deriv2 gt = g_tilde(r, nullptr);
    return type1_terms(kFlat, gt, spec_.N, spec_.p, spec_.lambda);
}

double ReducedOperator::potential_second(double r) const {
    if (spec_.kind != PotentialKind::CouplingV3)
        throw std::logic_error("potential_second: operator is not coupled");
    const Deriv2 gt = g_tilde(r, nullptr);
    return type2_terms(kFlat, gt, spec_.N, spec_.p, spec_.lambda);
}

double ReducedOperator::potential_first_via_t(double r) const {
    const double t = map_.t_of_r(r);
    return v_t_(t) + flat_weight_correction(map_.profile().f(t));
}

double ReducedOperator::potential_second_via_t(double r) const {
    const double t = map_.t_of_r(r);
    return v2_t_(t) + flat_weight_correction(map_.profile().f(t));
}

double ReducedOperator::coupling(double r) const {
    if (spec_.kind != PotentialKind::CouplingV3)
        throw std::logic_error("coupling: operator is not coupled");
    double t = 0.0;
    const Deriv2 gt = g_tilde(r, &t);
    return coupling_term(kFlat, gt) * std::sqrt(spec_.lambda);
}

ReducedOperator to_arclength(std::function<double(double)> v_in_t,
                             const ArclengthMap& map, const MetricProfile& profile,
                             PotentialKind kind, int N, int p, double lambda) {
    (void)profile;
    if (kind == PotentialKind::CouplingV3)
        throw std::invalid_argument("to_arclength: use assemble_type3 for coupled operators");
    return ReducedOperator(make_potential_spec(map, kind, N, p, lambda), map,
                           std::move(v_in_t));
}

ReducedOperator assemble_type3(const MetricProfile& profile, const ArclengthMap& map,
                               int N, int p, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument(
            "assemble_type3: lambda must be > 0 (harmonic modes do not pair)");
    return ReducedOperator(make_potential_spec(map, PotentialKind::CouplingV3, N, p, lambda),
                           map, potential_type1_general(profile, N, p, lambda),
                           potential_type2_general(profile, N, p, lambda),
                           coupling_v3(profile));
}

}  // namespace warpspec
