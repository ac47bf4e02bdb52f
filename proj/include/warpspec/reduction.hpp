#pragma once

// Reduced half-line operators of the form Laplacian over the warped product:
// type I/II Schroedinger operators -w'' + V(r) w and the coupled 2x2 type III
// system.  Potentials are assembled two independent ways: from the general
// t-coordinate bracket plus the flat-weight conjugation, and directly from the
// r-coordinate metric dr^2 + g~(r) dtheta^2.  The pure regions r < eps and
// r > c_bar admit closed forms, exposed for consistency checks.

#include <functional>
#include <optional>

#include "warpspec/metric.hpp"

namespace warpspec {

enum class PotentialKind { TypeI, TypeII, CouplingV3 };
enum class Regime { AEqMinusOne, ALtMinusOne };

struct PotentialSpec {
    PotentialKind kind = PotentialKind::TypeI;
    int N = 3;
    int p = 0;
    double lambda = 0.0;  // sphere eigenvalue; lambda_k^{p-1} for TypeII/CouplingV3
    Regime regime = Regime::AEqMinusOne;
    double a = -1.0;
    double b = 0.0;
    double epsilon = 1.0;
    double threshold1 = 0.0;  // ((N-2p-1)/2)^2 b^2
    double threshold2 = 0.0;  // ((N-2p+1)/2)^2 b^2
    std::optional<double> K1_tilde;  // a < -1 only
    std::optional<double> K2_tilde;
    double c_bar = 0.0;
    std::optional<double> c1;
};

PotentialSpec make_potential_spec(const ArclengthMap& map, PotentialKind kind,
                                  int N, int p, double lambda);

// six-term bracket of the type I operator in t-coordinates
double type1_terms(const Deriv2& f, const Deriv2& g, int N, int p, double lambda);
// type II bracket; the f'-g' cross term carries (2p-N-1)/4 and the g'' term
// -(N-2p+1)/4, which is the p -> N-p image of the type I pattern
double type2_terms(const Deriv2& f, const Deriv2& g, int N, int p, double lambda);
// off-diagonal weight g^{-3/2} f^{-1/2} g'
double coupling_term(const Deriv2& f, const Deriv2& g);

// potential shift produced by conjugating -d/dt (1/f) d/dt into -d^2/dr^2
double flat_weight_correction(const Deriv2& f);

std::function<double(double)> potential_type1_general(const MetricProfile& profile,
                                                      int N, int p, double lambda);
std::function<double(double)> potential_type2_general(const MetricProfile& profile,
                                                      int N, int p, double lambda);
std::function<double(double)> coupling_v3(const MetricProfile& profile);

// closed-form potential in the pure regions; empty inside the bridge
std::optional<double> region_potential(const PotentialSpec& spec, double r);

class ReducedOperator {
  public:
    // scalar kinds
    ReducedOperator(PotentialSpec spec, ArclengthMap map,
                    std::function<double(double)> v_in_t);
    // coupled kind
    ReducedOperator(PotentialSpec spec, ArclengthMap map,
                    std::function<double(double)> v1_in_t,
                    std::function<double(double)> v2_in_t,
                    std::function<double(double)> v3_in_t);

    const PotentialSpec& spec() const { return spec_; }
    const ArclengthMap& map() const { return map_; }

    // scalar potential, direct r-coordinate evaluation (default path)
    double potential(double r) const { return potential_direct(r); }
    double potential_direct(double r) const;
    // t-coordinate bracket plus conjugation correction, for cross-checking
    double potential_via_t(double r) const;

    // coupled system entries
    double potential_first(double r) const;
    double potential_second(double r) const;
    double potential_first_via_t(double r) const;
    double potential_second_via_t(double r) const;
    double coupling(double r) const;  // V3(r) * sqrt(lambda), symmetric

  private:
    Deriv2 g_tilde(double r, double* t_out) const;

    PotentialSpec spec_;
    ArclengthMap map_;
    std::function<double(double)> v_t_;    // scalar, or first diagonal
    std::function<double(double)> v2_t_;   // second diagonal (coupled)
    std::function<double(double)> v3_t_;   // bare coupling weight (coupled)
};

ReducedOperator to_arclength(std::function<double(double)> v_in_t,
                             const ArclengthMap& map, const MetricProfile& profile,
                             PotentialKind kind, int N, int p, double lambda);

// coupled type III operator; lambda must be a positive coclosed eigenvalue of
// degree p-1 (the decomposition divides by sqrt(lambda))
ReducedOperator assemble_type3(const MetricProfile& profile, const ArclengthMap& map,
                               int N, int p, double lambda);

}  // namespace warpspec
