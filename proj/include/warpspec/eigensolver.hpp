#pragma once

// Finite-difference discretization of the reduced operators on truncated
// intervals [r_min, L] with Dirichlet ends, eigenvalue extraction by pivot
// counting plus bisection, and the truncation-ladder machinery that separates
// discrete eigenvalues from essential-band approximants.

#include <optional>
#include <string>
#include <vector>

#include "warpspec/reduction.hpp"

namespace warpspec {

struct GridPolicy {
    double r_min_factor = 0.1;  // r_min = epsilon * factor, must stay <= eps/10
    double ratio = 1.02;        // geometric stretching near zero
    int n_min = 4096;           // nodes at the shortest ladder length
    double spacing = 0.0;       // uniform spacing; 0 = derive from n_min
};

struct Grid {
    std::vector<double> nodes;  // includes both Dirichlet endpoints
    double r_min = 0.0;
    double length = 0.0;
};

// geometric head near r_min switching to uniform spacing; throws when the
// grid invariants (increasing nodes, n >= 64, r_min <= eps/10) fail
Grid build_grid(const GridPolicy& policy, double epsilon, double length);

// symmetric banded matrix, band[o][i] = A(i, i+o) for o = 0..half_bandwidth
struct SymBanded {
    int dim = 0;
    int half_bandwidth = 1;
    std::vector<std::vector<double>> band;

    double gershgorin_lower() const;
};

struct DiscretizedOperator {
    SymBanded matrix;
    std::vector<double> interior_nodes;  // one entry per grid point carrying dofs
    int components = 1;                  // 2 for the coupled system (interleaved)
    double c_bar = 0.0;
};

DiscretizedOperator discretize(const ReducedOperator& op, const Grid& grid);

// number of eigenvalues strictly below sigma (LDL^T inertia count)
int count_below(const SymBanded& matrix, double sigma);

// all eigenvalues below cutoff, ascending, bisected to 1e-9 relative accuracy
std::vector<double> eigenvalues_below(const SymBanded& matrix, double cutoff);

// inverse-iteration eigenvector for an isolated (or clustered) eigenvalue;
// throws std::runtime_error with the achieved residual on non-convergence
std::vector<double> eigenvector(const SymBanded& matrix, double eigenvalue);

enum class StateClass { Unclassified, Discrete, Band, Ambiguous };

struct LevelSpectrum {
    double length = 0.0;
    std::vector<double> eigenvalues;
    std::vector<double> tail_mass;  // eigenvector mass beyond c_bar
    std::vector<StateClass> classes;
    std::optional<double> band_min;
};

struct SpectrumEstimate {
    std::vector<LevelSpectrum> levels;
    std::optional<double> bottom;  // Richardson-extrapolated band bottom
    double uncertainty = 0.0;
    bool count_stable = false;  // eigenvalue count below cutoff settled
    bool band_found = false;
    std::vector<std::string> notes;
};

// eigenvalues and tail masses below cutoff at a single truncation length;
// building block for the ladder (parallelizable per length)
LevelSpectrum solve_level(const ReducedOperator& op, double length,
                          const GridPolicy& policy, double cutoff);

// classification plus band-bottom extrapolation over precomputed levels
SpectrumEstimate assemble_estimate(const ReducedOperator& op,
                                   std::vector<LevelSpectrum> levels);

// one spacing for every ladder length, derived from the shortest, so the
// grids nest and drift under L-doubling isolates truncation effects
GridPolicy ladder_policy(const GridPolicy& policy, const ReducedOperator& op,
                         double shortest_length);

// ladder of truncation lengths (increasing, at least 3); eigenvalues below
// cutoff on each, classified band/discrete/ambiguous, with the band-cluster
// infimum extrapolated in 1/L^2
SpectrumEstimate essential_bottom(const ReducedOperator& op,
                                  const std::vector<double>& ladder,
                                  const GridPolicy& policy, double cutoff);

}  // namespace warpspec
