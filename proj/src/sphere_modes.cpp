#include "warpspec/sphere_modes.hpp"

#include <algorithm>
#include <stdexcept>

namespace warpspec {

std::vector<SphereMode> coclosed_eigenvalues(int N, int p, int k_max) {
    if (N < 2) throw std::invalid_argument("sphere modes: N must be >= 2");
    if (p < 0 || p > N - 1) throw std::invalid_argument("sphere modes: p outside [0, N-1]");
    if (k_max < 0) throw std::invalid_argument("sphere modes: k_max must be >= 0");

    std::vector<SphereMode> modes;
    if (p == 0 || p == N - 1) {
        // harmonic mode plus the scalar tower (degree N-1 mirrors degree 0)
        for (int k = 0; k <= k_max; ++k)
            modes.push_back({p, k, static_cast<double>(k) * (k + N - 2)});
    } else {
        for (int k = 1; k <= k_max; ++k)
            modes.push_back({p, k, static_cast<double>(k + p) * (k + N - 2 - p)});
    }
    std::sort(modes.begin(), modes.end(),
              [](const SphereMode& x, const SphereMode& y) { return x.lambda < y.lambda; });
    return modes;
}

double lowest_form_eigenvalue(int N, int q) {
    if (q < 0 || q > N - 1) throw std::invalid_argument("sphere modes: q outside [0, N-1]");
    if (q == 0 || q == N - 1) return 0.0;  // harmonic forms exist
    const double coexact = static_cast<double>(q + 1) * (N - 1 - q);
    const double exact = static_cast<double>(q) * (N - q);  // = coexact tower of q-1
    return std::min(coexact, exact);
}

double lambda_bar(int N, int p) {
    if (p < 0 || p > N) throw std::invalid_argument("sphere modes: p outside [0, N]");
    double best = -1.0;
    for (int q : {p - 1, p}) {
        if (q < 0 || q > N - 1) continue;
        const double low = lowest_form_eigenvalue(N, q);
        if (best < 0.0 || low < best) best = low;
    }
    if (best < 0.0) throw std::invalid_argument("sphere modes: no valid degree for lambda_bar");
    return best;
}

}  // namespace warpspec
