#pragma once

// Eigenvalues of the Laplace-Beltrami operator on coclosed p-forms of the
// round sphere S^{N-1}.  The coexact towers follow (k+p)(k+N-2-p) for k >= 1;
// harmonic forms contribute lambda = 0 exactly in degrees 0 and N-1.

#include <vector>

namespace warpspec {

struct SphereMode {
    int p = 0;
    int k = 0;
    double lambda = 0.0;
};

// Modes sorted by lambda.  Degree 0 and N-1 carry lambda = 0 at k = 0 followed
// by the scalar tower k(k+N-2); interior degrees carry the coexact tower for
// k = 1..k_max.  Throws std::invalid_argument for p outside [0, N-1].
std::vector<SphereMode> coclosed_eigenvalues(int N, int p, int k_max);

// smallest eigenvalue of the full form Laplacian on q-forms of S^{N-1}
double lowest_form_eigenvalue(int N, int q);

// min of the lowest eigenvalues on p- and (p-1)-forms of S^{N-1}; valid
// degrees outside [0, N-1] are skipped (p in [0, N])
double lambda_bar(int N, int p);

}  // namespace warpspec
