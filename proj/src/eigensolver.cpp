#include "warpspec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace warpspec {

Grid build_grid(const GridPolicy& policy, double epsilon, double length) {
    const double r_min = epsilon * policy.r_min_factor;
    if (!(r_min > 0.0) || r_min > epsilon / 10.0 + 1e-15)
        throw std::invalid_argument("grid: r_min must satisfy 0 < r_min <= eps/10");
    if (!(length > r_min)) throw std::invalid_argument("grid: length must exceed r_min");

    const double h = policy.spacing > 0.0
                         ? policy.spacing
                         : (length - r_min) / static_cast<double>(policy.n_min);

    Grid grid;
    grid.r_min = r_min;
    grid.length = length;
    grid.nodes.push_back(r_min);
    // geometric stretch until the local step reaches the uniform spacing
    double r = r_min;
    while (r * (policy.ratio - 1.0) < h) {
        r *= policy.ratio;
        if (r >= length) break;
        grid.nodes.push_back(r);
    }
    while (grid.nodes.back() + 1.5 * h < length) grid.nodes.push_back(grid.nodes.back() + h);
    grid.nodes.push_back(length);

    if (grid.nodes.size() < 64) throw std::invalid_argument("grid: fewer than 64 nodes");
    for (size_t i = 1; i < grid.nodes.size(); ++i)
        if (!(grid.nodes[i] > grid.nodes[i - 1]))
            throw std::invalid_argument("grid: nodes not strictly increasing");
    return grid;
}

double SymBanded::gershgorin_lower() const {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim; ++i) {
        double radius = 0.0;
        for (int o = 1; o <= half_bandwidth; ++o) {
            if (i + o < dim) radius += std::abs(band[o][i]);
            if (i - o >= 0) radius += std::abs(band[o][i - o]);
        }
        lo = std::min(lo, band[0][i] - radius);
    }
    return lo;
}

namespace {

// symmetrized 3-point kinetic stencil on a non-uniform grid: the similarity
// transform by the half-cell weights keeps the matrix symmetric
struct KineticStencil {
    std::vector<double> diag;
    std::vector<double> off;
};

KineticStencil kinetic_stencil(const std::vector<double>& nodes) {
    const int m = static_cast<int>(nodes.size()) - 2;
    KineticStencil k;
    k.diag.resize(m);
    k.off.resize(m - 1);
    auto hbar = [&](int i) {  // half-cell around interior node i (0-based)
        return 0.5 * (nodes[i + 2] - nodes[i]);
    };
    for (int i = 0; i < m; ++i) {
        const double hm = nodes[i + 1] - nodes[i];
        const double hp = nodes[i + 2] - nodes[i + 1];
        k.diag[i] = (1.0 / hm + 1.0 / hp) / hbar(i);
        if (i + 1 < m) k.off[i] = -1.0 / (hp * std::sqrt(hbar(i) * hbar(i + 1)));
    }
    return k;
}

void require_finite(double v, double r) {
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "discretize: potential not finite at r = " << r;
        throw std::runtime_error(msg.str());
    }
}

}  // namespace

DiscretizedOperator discretize(const ReducedOperator& op, const Grid& grid) {
    const int m = static_cast<int>(grid.nodes.size()) - 2;
    const KineticStencil kin = kinetic_stencil(grid.nodes);

    DiscretizedOperator out;
    out.c_bar = op.spec().c_bar;
    out.interior_nodes.assign(grid.nodes.begin() + 1, grid.nodes.end() - 1);

    if (op.spec().kind != PotentialKind::CouplingV3) {
        out.components = 1;
        out.matrix.dim = m;
        out.matrix.half_bandwidth = 1;
        out.matrix.band.assign(2, {});
        out.matrix.band[0].resize(m);
        out.matrix.band[1].resize(m - 1);
        for (int i = 0; i < m; ++i) {
            const double r = out.interior_nodes[i];
            const double v = op.potential(r);
            require_finite(v, r);
            out.matrix.band[0][i] = kin.diag[i] + v;
            if (i + 1 < m) out.matrix.band[1][i] = kin.off[i];
        }
        return out;
    }

    // coupled system, interleaved components: (w1_0, w2_0, w1_1, w2_1, ...)
    out.components = 2;
    out.matrix.dim = 2 * m;
    out.matrix.half_bandwidth = 2;
    out.matrix.band.assign(3, {});
    out.matrix.band[0].resize(2 * m);
    out.matrix.band[1].resize(2 * m - 1, 0.0);
    out.matrix.band[2].resize(2 * m - 2, 0.0);
    for (int i = 0; i < m; ++i) {
        const double r = out.interior_nodes[i];
        const double v1 = op.potential_first(r);
        const double v2 = op.potential_second(r);
        const double vc = op.coupling(r);
        require_finite(v1, r);
        require_finite(v2, r);
        require_finite(vc, r);
        out.matrix.band[0][2 * i] = kin.diag[i] + v1;
        out.matrix.band[0][2 * i + 1] = kin.diag[i] + v2;
        out.matrix.band[1][2 * i] = vc;  // same-node coupling, symmetric
        if (i + 1 < m) {
            out.matrix.band[2][2 * i] = kin.off[i];
            out.matrix.band[2][2 * i + 1] = kin.off[i];
        }
    }
    return out;
}

int count_below(const SymBanded& a, double sigma) {
    const int n = a.dim;
    const int hw = a.half_bandwidth;
    int count = 0;

    if (hw == 1) {  // classic Sturm pivot recurrence
        double prev = 1.0;
        for (int i = 0; i < n; ++i) {
            const double e = (i > 0) ? a.band[1][i - 1] : 0.0;
            double d = a.band[0][i] - sigma - e * e / prev;
            if (d == 0.0) d = -std::numeric_limits<double>::min();
            if (d < 0.0) ++count;
            prev = d;
        }
        return count;
    }

    // banded LDL^T pivots; L kept as full (thin) band
    std::vector<double> d(n, 0.0);
    std::vector<std::vector<double>> L(hw + 1, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {
        double dj = a.band[0][j] - sigma;
        for (int k = std::max(0, j - hw); k < j; ++k) dj -= L[j - k][k] * L[j - k][k] * d[k];
        if (dj == 0.0) dj = -std::numeric_limits<double>::min();
        d[j] = dj;
        if (dj < 0.0) ++count;
        for (int i = j + 1; i <= std::min(n - 1, j + hw); ++i) {
            double lij = a.band[i - j][j];
            for (int k = std::max(0, i - hw); k < j; ++k)
                lij -= L[i - k][k] * L[j - k][k] * d[k];
            L[i - j][j] = lij / dj;
        }
    }
    return count;
}

std::vector<double> eigenvalues_below(const SymBanded& a, double cutoff) {
    const int total = count_below(a, cutoff);
    std::vector<double> eigs;
    eigs.reserve(total);
    double lower = a.gershgorin_lower();
    for (int j = 1; j <= total; ++j) {
        double lo = lower, hi = cutoff;
        while (hi - lo > 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)})) {
            const double mid = 0.5 * (lo + hi);
            if (count_below(a, mid) >= j)
                hi = mid;
            else
                lo = mid;
        }
        const double value = 0.5 * (lo + hi);
        eigs.push_back(value);
        lower = lo;  // eigenvalues are requested in ascending order
    }
    return eigs;
}

namespace {

// banded LU with partial pivoting; row i holds columns [i-hw, i+2hw]
class BandedLU {
  public:
    BandedLU(const SymBanded& a, double shift) : n_(a.dim), hw_(a.half_bandwidth) {
        width_ = 3 * hw_ + 1;
        w_.assign(static_cast<size_t>(n_) * width_, 0.0);
        pivot_.resize(n_);
        mult_.assign(static_cast<size_t>(n_) * hw_, 0.0);
        for (int i = 0; i < n_; ++i) {
            at(i, i) = a.band[0][i] - shift;
            for (int o = 1; o <= hw_; ++o) {
                if (i + o < n_) at(i, i + o) = a.band[o][i];
                if (i - o >= 0) at(i, i - o) = a.band[o][i - o];
            }
        }
        factor();
    }

    std::vector<double> solve(std::vector<double> b) const {
        for (int k = 0; k < n_; ++k) {
            if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
            for (int i = k + 1; i <= std::min(n_ - 1, k + hw_); ++i)
                b[i] -= mult_[static_cast<size_t>(k) * hw_ + (i - k - 1)] * b[k];
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = b[i];
            for (int j = i + 1; j <= std::min(n_ - 1, i + 2 * hw_); ++j) s -= cat(i, j) * b[j];
            b[i] = s / cat(i, i);
        }
        return b;
    }

  private:
    double& at(int i, int j) { return w_[static_cast<size_t>(i) * width_ + (j - i + hw_)]; }
    double cat(int i, int j) const {
        return w_[static_cast<size_t>(i) * width_ + (j - i + hw_)];
    }

    void factor() {
        for (int k = 0; k < n_; ++k) {
            int piv = k;
            for (int i = k + 1; i <= std::min(n_ - 1, k + hw_); ++i)
                if (std::abs(cat(i, k)) > std::abs(cat(piv, k))) piv = i;
            pivot_[k] = piv;
            if (piv != k)
                for (int j = k; j <= std::min(n_ - 1, k + 2 * hw_); ++j)
                    std::swap(at(k, j), at(piv, j));
            double pk = cat(k, k);
            if (pk == 0.0) {
                pk = std::numeric_limits<double>::min();
                at(k, k) = pk;
            }
            for (int i = k + 1; i <= std::min(n_ - 1, k + hw_); ++i) {
                const double m = cat(i, k) / pk;
                mult_[static_cast<size_t>(k) * hw_ + (i - k - 1)] = m;
                at(i, k) = 0.0;
                for (int j = k + 1; j <= std::min(n_ - 1, k + 2 * hw_); ++j)
                    at(i, j) -= m * cat(k, j);
            }
        }
    }

    int n_, hw_, width_;
    std::vector<double> w_;
    std::vector<double> mult_;
    std::vector<int> pivot_;
};

double apply_residual(const SymBanded& a, const std::vector<double>& x, double lambda) {
    const int n = a.dim;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = (a.band[0][i] - lambda) * x[i];
        for (int o = 1; o <= a.half_bandwidth; ++o) {
            if (i + o < n) s += a.band[o][i] * x[i + o];
            if (i - o >= 0) s += a.band[o][i - o] * x[i - o];
        }
        norm += s * s;
    }
    return std::sqrt(norm);
}

}  // namespace

std::vector<double> eigenvector(const SymBanded& a, double eigenvalue) {
    const int n = a.dim;
    const double scale = std::max(1.0, std::abs(eigenvalue));
    const BandedLU lu(a, eigenvalue + 1e-11 * scale);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::sin((i + 1) * 3.1 / (n + 1.0)) + 0.3;
    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 8; ++iter) {
        x = lu.solve(std::move(x));
        double norm = 0.0;
        for (double v : x) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : x) v /= norm;
        residual = apply_residual(a, x, eigenvalue);
        if (residual < 1e-6 * scale) return x;
    }
    std::ostringstream msg;
    msg << "eigenvector: inverse iteration did not converge, residual " << residual;
    throw std::runtime_error(msg.str());
}

namespace {

double tail_mass_beyond(const DiscretizedOperator& disc, const std::vector<double>& vec) {
    double tail = 0.0, total = 0.0;
    for (size_t i = 0; i < vec.size(); ++i) {
        const double r = disc.interior_nodes[i / disc.components];
        const double w = vec[i] * vec[i];
        total += w;
        if (r > disc.c_bar) tail += w;
    }
    return total > 0.0 ? tail / total : 0.0;
}

double nearest_distance(const std::vector<double>& sorted, double x) {
    if (sorted.empty()) return std::numeric_limits<double>::infinity();
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted.end()) best = std::min(best, std::abs(*it - x));
    if (it != sorted.begin()) best = std::min(best, std::abs(*(it - 1) - x));
    return best;
}

}  // namespace

LevelSpectrum solve_level(const ReducedOperator& op, double length,
                          const GridPolicy& policy, double cutoff) {
    const Grid grid = build_grid(policy, op.spec().epsilon, length);
    const DiscretizedOperator disc = discretize(op, grid);
    LevelSpectrum level;
    level.length = length;
    level.eigenvalues = eigenvalues_below(disc.matrix, cutoff);
    for (double lam : level.eigenvalues) {
        try {
            level.tail_mass.push_back(tail_mass_beyond(disc, eigenvector(disc.matrix, lam)));
        } catch (const std::runtime_error&) {
            level.tail_mass.push_back(-1.0);  // no vector: classified ambiguous
        }
    }
    level.classes.assign(level.eigenvalues.size(), StateClass::Unclassified);
    return level;
}

GridPolicy ladder_policy(const GridPolicy& policy, const ReducedOperator& op,
                         double shortest_length) {
    GridPolicy fixed = policy;
    if (fixed.spacing <= 0.0)
        fixed.spacing = (shortest_length - op.spec().epsilon * policy.r_min_factor) /
                        static_cast<double>(policy.n_min);
    return fixed;
}

SpectrumEstimate assemble_estimate(const ReducedOperator& op,
                                   std::vector<LevelSpectrum> levels) {
    if (levels.size() < 2)
        throw std::invalid_argument("assemble_estimate: need at least 2 levels");

    SpectrumEstimate est;
    est.levels = std::move(levels);
    // near the 1/r^2 limit-circle regime the truncation at r_min matters
    const double m1 = 0.5 * (op.spec().N - 2 * op.spec().p - 1);
    if (m1 * (m1 - 1.0) + op.spec().lambda < 0.75)
        est.notes.push_back("inverse-square coefficient below 3/4: r_min-sensitive");

    // classify against the previous ladder entry
    for (size_t li = 1; li < est.levels.size(); ++li) {
        LevelSpectrum& level = est.levels[li];
        const std::vector<double>& prev = est.levels[li - 1].eigenvalues;
        for (size_t j = 0; j < level.eigenvalues.size(); ++j) {
            const double lam = level.eigenvalues[j];
            const double drift = nearest_distance(prev, lam);
            const double tol = 1e-4 * std::max(1.0, std::abs(lam));
            const double mass = level.tail_mass[j];
            StateClass cls = StateClass::Ambiguous;
            if (mass >= 0.0) {
                if (drift > tol && mass > 0.5)
                    cls = StateClass::Band;
                else if (drift <= tol && mass <= 0.5)
                    cls = StateClass::Discrete;
            }
            level.classes[j] = cls;
            if (cls == StateClass::Band &&
                (!level.band_min || lam < *level.band_min))
                level.band_min = lam;
        }
        if (!level.eigenvalues.empty() &&
            std::count(level.classes.begin(), level.classes.end(), StateClass::Ambiguous) > 0)
            est.notes.push_back("ambiguous state(s) at L = " + std::to_string(level.length));
    }

    // band bottom, Richardson-extrapolated in 1/L^2 from the last two levels
    std::vector<std::pair<double, double>> bottoms;
    for (const LevelSpectrum& level : est.levels)
        if (level.band_min) bottoms.emplace_back(level.length, *level.band_min);
    est.band_found = !bottoms.empty();
    if (bottoms.size() >= 2) {
        const auto [l1, b1] = bottoms[bottoms.size() - 2];
        const auto [l2, b2] = bottoms.back();
        const double ratio2 = (l2 / l1) * (l2 / l1);
        est.bottom = b2 + (b2 - b1) / (ratio2 - 1.0);
        est.uncertainty = std::abs(b2 - b1);
    } else if (bottoms.size() == 1) {
        est.bottom = bottoms.back().second;
        est.uncertainty = std::abs(bottoms.back().second);
    }

    const size_t nl = est.levels.size();
    est.count_stable =
        est.levels[nl - 1].eigenvalues.size() == est.levels[nl - 2].eigenvalues.size();
    if (est.count_stable && !est.band_found)
        est.notes.push_back("ess empty below cutoff: count stabilized across the ladder");
    return est;
}

SpectrumEstimate essential_bottom(const ReducedOperator& op,
                                  const std::vector<double>& ladder,
                                  const GridPolicy& policy, double cutoff) {
    if (ladder.size() < 3)
        throw std::invalid_argument("essential_bottom: ladder needs >= 3 lengths");
    for (size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] > ladder[i - 1]))
            throw std::invalid_argument("essential_bottom: ladder must be increasing");

    const GridPolicy fixed = ladder_policy(policy, op, ladder.front());
    std::vector<LevelSpectrum> levels;
    for (double L : ladder) levels.push_back(solve_level(op, L, fixed, cutoff));
    return assemble_estimate(op, std::move(levels));
}

}  // namespace warpspec
