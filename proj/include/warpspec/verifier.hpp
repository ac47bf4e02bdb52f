#pragma once

// Numerical checks of the unitary-reduction chain: the fiber actions on
// h(t)-coefficients, conjugated by the weight transforms, must reproduce the
// flat-weight operators.  Both sides are evaluated with 4th-order finite
// differences on a uniform t-grid, so a correct identity leaves a residual
// that shrinks at 4th order under step refinement.

#include <string>
#include <utility>
#include <vector>

#include "warpspec/metric.hpp"

namespace warpspec {

// compactly supported polynomial bump (1-s^2)^m with exact derivatives
struct BumpProfile {
    double t0 = 0.5;
    double t1 = 2.5;
    int exponent = 6;
    double amplitude = 1.0;

    Deriv2 eval(double t) const;
};

enum class Mutation { None, SwapCouplings, Type2CrossSign };

struct ResidualRow {
    std::string check;
    int N = 0;
    int p = 0;
    double lambda = 0.0;
    double step = 0.0;
    double residual = 0.0;
};

double check_type1_reduction(const MetricProfile& profile, int N, int p, double lambda,
                             const BumpProfile& bump, double grid_step);
double check_type2_reduction(const MetricProfile& profile, int N, int p, double lambda,
                             const BumpProfile& bump, double grid_step,
                             Mutation mutation = Mutation::None);
double check_type3_reduction(const MetricProfile& profile, int N, int p, double lambda,
                             const BumpProfile& bump1, const BumpProfile& bump2,
                             double grid_step, Mutation mutation = Mutation::None);

// weighted-norm identity: integral of the h-side weight against h^2 versus the
// plain integral of w^2; returns the two quadrature values
std::pair<double, double> norm_identity(const MetricProfile& profile, int N, int p,
                                        bool type_two, const BumpProfile& bump);

struct VerifierReport {
    std::vector<ResidualRow> rows;
    std::vector<double> orders_type1, orders_type2, orders_type3;
    bool pass = false;
};

// residual ladder over `levels` halvings starting at base_step; the gate
// demands mean order >= 3.4 per check and a small final residual
VerifierReport run_verifier_suite(const MetricProfile& profile, double base_step,
                                  int levels, Mutation mutation = Mutation::None);

}  // namespace warpspec
