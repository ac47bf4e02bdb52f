#pragma once

// Warped-product metric ds^2 = f(t) dt^2 + g(t) dtheta^2 on the punctured unit
// ball: Euclidean near the origin (f = 1, g = t^2 on (0, eps)), exponential
// near the boundary (f = e^{-2(a+1)t}, g = e^{-2bt} for t > c), with a C^2
// quintic-Hermite bridge of log f and log g on [eps, c].  Also provides the
// arclength coordinate r(t) = int_0^t sqrt(f) and its inverse.

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace warpspec {

// value together with first and second derivative at a point
struct Deriv2 {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

struct WarpParams {
    int dimension = 3;     // N >= 2
    double a = -1.0;       // a <= -1
    double b = -1.0;
    double epsilon = 1.0;  // end of the Euclidean region, > 0
    double c = 2.0;        // start of the asymptotic region, > epsilon

    // throws std::invalid_argument when any constraint is violated
    void validate() const;
};

// quintic in s = (t - t0)/(t1 - t0) pinned to value/d1/d2 at both endpoints
class QuinticHermite {
  public:
    QuinticHermite() = default;
    QuinticHermite(double t0, double t1, const Deriv2& left, const Deriv2& right);

    Deriv2 eval(double t) const;

  private:
    double t0_ = 0.0, h_ = 1.0;
    std::array<double, 6> coeff_{};
};

class MetricProfile {
  public:
    explicit MetricProfile(const WarpParams& params);

    const WarpParams& params() const { return params_; }

    Deriv2 f(double t) const;
    Deriv2 g(double t) const;

  private:
    WarpParams params_;
    QuinticHermite log_f_bridge_;
    QuinticHermite log_g_bridge_;
};

MetricProfile build_profile(const WarpParams& params);

// r(t) = int_0^t sqrt(f(s)) ds, strictly increasing, with closed forms in the
// outer regions and adaptive quadrature on the bridge.
class ArclengthMap {
  public:
    explicit ArclengthMap(const MetricProfile& profile);

    double r_of_t(double t) const;
    double t_of_r(double r) const;

    double K() const { return K_; }          // int_eps^c sqrt(f)
    double c_bar() const { return c_bar_; }  // K + eps, r-image of t = c
    // defined for a < -1 only: r(t) = c1 + e^{|a+1| t}/|a+1| beyond c
    std::optional<double> c1() const { return c1_; }

    const MetricProfile& profile() const { return profile_; }

  private:
    double bridge_r(double t) const;  // r on [eps, c], table plus local quadrature

    MetricProfile profile_;
    double K_ = 0.0;
    double c_bar_ = 0.0;
    std::optional<double> c1_;
    std::vector<double> knot_t_;
    std::vector<double> knot_r_;
};

ArclengthMap arclength(const MetricProfile& profile);

// adaptive Simpson; throws std::runtime_error naming the subinterval on
// non-convergence
double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 double abs_tol);

}  // namespace warpspec
