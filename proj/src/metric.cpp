#include "warpspec/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace warpspec {

void WarpParams::validate() const {
    if (dimension < 2) throw std::invalid_argument("warp params: dimension must be >= 2");
    if (!(a <= -1.0)) throw std::invalid_argument("warp params: a must be <= -1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("warp params: epsilon must be > 0");
    if (!(c > epsilon)) throw std::invalid_argument("warp params: c must be > epsilon");
    if (!std::isfinite(b)) throw std::invalid_argument("warp params: b must be finite");
}

QuinticHermite::QuinticHermite(double t0, double t1, const Deriv2& left, const Deriv2& right)
    : t0_(t0), h_(t1 - t0) {
    coeff_[0] = left.value;
    coeff_[1] = left.d1 * h_;
    coeff_[2] = left.d2 * h_ * h_ / 2.0;
    const double r0 = right.value - (coeff_[0] + coeff_[1] + coeff_[2]);
    const double r1 = right.d1 * h_ - (coeff_[1] + 2.0 * coeff_[2]);
    const double r2 = right.d2 * h_ * h_ - 2.0 * coeff_[2];
    coeff_[3] = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
    coeff_[4] = -15.0 * r0 + 7.0 * r1 - r2;
    coeff_[5] = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
}

Deriv2 QuinticHermite::eval(double t) const {
    const double s = (t - t0_) / h_;
    double v = 0.0, d = 0.0, dd = 0.0;
    // Horner for the polynomial and its two s-derivatives
    for (int k = 5; k >= 0; --k) {
        if (k >= 2) dd = dd * s + static_cast<double>(k) * (k - 1) * coeff_[k];
        if (k >= 1) d = d * s + static_cast<double>(k) * coeff_[k];
        v = v * s + coeff_[k];
    }
    return {v, d / h_, dd / (h_ * h_)};
}

namespace {

Deriv2 exp_of(const Deriv2& u) {
    const double e = std::exp(u.value);
    return {e, u.d1 * e, (u.d2 + u.d1 * u.d1) * e};
}

}  // namespace

MetricProfile::MetricProfile(const WarpParams& params) : params_(params) {
    params_.validate();
    const double eps = params_.epsilon, c = params_.c;
    const double slope_f = -2.0 * (params_.a + 1.0);  // d/dt log f beyond c
    const double slope_g = -2.0 * params_.b;
    log_f_bridge_ = QuinticHermite(eps, c, {0.0, 0.0, 0.0}, {slope_f * c, slope_f, 0.0});
    log_g_bridge_ = QuinticHermite(eps, c,
                                   {2.0 * std::log(eps), 2.0 / eps, -2.0 / (eps * eps)},
                                   {slope_g * c, slope_g, 0.0});
}

Deriv2 MetricProfile::f(double t) const {
    if (t <= params_.epsilon) return {1.0, 0.0, 0.0};
    if (t >= params_.c) {
        const double s = -2.0 * (params_.a + 1.0);
        const double v = std::exp(s * t);
        return {v, s * v, s * s * v};
    }
    return exp_of(log_f_bridge_.eval(t));
}

Deriv2 MetricProfile::g(double t) const {
    if (t <= params_.epsilon) return {t * t, 2.0 * t, 2.0};
    if (t >= params_.c) {
        const double s = -2.0 * params_.b;
        const double v = std::exp(s * t);
        return {v, s * v, s * s * v};
    }
    return exp_of(log_g_bridge_.eval(t));
}

MetricProfile build_profile(const WarpParams& params) { return MetricProfile(params); }

namespace {

double simpson(double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adaptive(const std::function<double(double)>& fn, double lo, double hi,
                double flo, double fmid, double fhi, double whole, double tol, int depth) {
    if (depth > 60) {
        std::ostringstream msg;
        msg << "quadrature failed to converge on subinterval [" << lo << ", " << hi << "]";
        throw std::runtime_error(msg.str());
    }
    const double mid = 0.5 * (lo + hi);
    const double fl = fn(0.5 * (lo + mid));
    const double fr = fn(0.5 * (mid + hi));
    const double left = simpson(lo, mid, flo, fl, fmid);
    const double right = simpson(mid, hi, fmid, fr, fhi);
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(fn, lo, mid, flo, fl, fmid, left, 0.5 * tol, depth + 1) +
           adaptive(fn, mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 double abs_tol) {
    if (lo == hi) return 0.0;
    const double flo = fn(lo), fhi = fn(hi), fmid = fn(0.5 * (lo + hi));
    const double whole = simpson(lo, hi, flo, fmid, fhi);
    return adaptive(fn, lo, hi, flo, fmid, fhi, whole, abs_tol, 0);
}

namespace {
constexpr double kQuadTol = 1e-12;
constexpr double kInverseTol = 1e-12;
constexpr int kBridgeKnots = 512;
}  // namespace

ArclengthMap::ArclengthMap(const MetricProfile& profile) : profile_(profile) {
    const WarpParams& p = profile_.params();
    auto sqrt_f = [this](double t) { return std::sqrt(profile_.f(t).value); };

    // cumulative table over the bridge; r_of_t refines from the nearest knot
    knot_t_.resize(kBridgeKnots + 1);
    knot_r_.resize(kBridgeKnots + 1);
    const double dt = (p.c - p.epsilon) / kBridgeKnots;
    knot_t_[0] = p.epsilon;
    knot_r_[0] = p.epsilon;  // r(eps) = eps: f = 1 on (0, eps]
    for (int i = 1; i <= kBridgeKnots; ++i) {
        knot_t_[i] = p.epsilon + i * dt;
        knot_r_[i] = knot_r_[i - 1] + integrate(sqrt_f, knot_t_[i - 1], knot_t_[i], kQuadTol);
    }
    K_ = knot_r_[kBridgeKnots] - p.epsilon;
    c_bar_ = K_ + p.epsilon;
    if (p.a < -1.0) {
        const double alpha = std::abs(p.a + 1.0);
        c1_ = K_ + p.epsilon - std::exp(alpha * p.c) / alpha;
    }
}

double ArclengthMap::bridge_r(double t) const {
    const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
    const int idx = std::max<int>(0, static_cast<int>(it - knot_t_.begin()) - 1);
    auto sqrt_f = [this](double s) { return std::sqrt(profile_.f(s).value); };
    return knot_r_[idx] + integrate(sqrt_f, knot_t_[idx], t, kQuadTol);
}

double ArclengthMap::r_of_t(double t) const {
    const WarpParams& p = profile_.params();
    if (t <= p.epsilon) return t;
    if (t <= p.c) return bridge_r(t);
    if (p.a == -1.0) return c_bar_ + (t - p.c);  // f = 1 beyond c
    const double alpha = std::abs(p.a + 1.0);
    return *c1_ + std::exp(alpha * t) / alpha;
}

double ArclengthMap::t_of_r(double r) const {
    const WarpParams& p = profile_.params();
    if (r <= p.epsilon) return r;
    if (r >= c_bar_) {
        if (p.a == -1.0) return p.c + (r - c_bar_);
        const double alpha = std::abs(p.a + 1.0);
        return std::log(alpha * (r - *c1_)) / alpha;
    }
    // bridge: safeguarded Newton on the monotone map, bracket from the table
    const auto it = std::lower_bound(knot_r_.begin(), knot_r_.end(), r);
    int idx = std::max<int>(0, static_cast<int>(it - knot_r_.begin()) - 1);
    double lo = knot_t_[idx];
    double hi = knot_t_[std::min<int>(idx + 1, kBridgeKnots)];
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double val = bridge_r(t) - r;
        if (std::abs(val) < kInverseTol) return t;
        if (val > 0.0)
            hi = t;
        else
            lo = t;
        const double deriv = std::sqrt(profile_.f(t).value);
        double next = t - val / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    return t;
}

ArclengthMap arclength(const MetricProfile& profile) { return ArclengthMap(profile); }

}  // namespace warpspec
