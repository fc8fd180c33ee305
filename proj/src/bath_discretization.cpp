#include "chainqed/bath_discretization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chainqed/common.hpp"
#include "chainqed/linalg.hpp"

namespace chainqed {

namespace {

// Nodes/weights of the q-point Gauss-Legendre rule on [-1, 1], via
// Golub-Welsch on the Legendre recurrence.
struct GaussRule {
    Eigen::VectorXd node;
    Eigen::VectorXd weight;
};

const GaussRule& gauss_legendre_32() {
    static const GaussRule rule = [] {
        const int q = 32;
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(q);
        Eigen::VectorXd sub(q - 1);
        for (int k = 1; k < q; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
        TridiagEig eig = tridiag_eig(diag, sub, true);
        GaussRule r;
        r.node = eig.values;
        r.weight.resize(q);
        for (int k = 0; k < q; ++k)
            r.weight[k] = 2.0 * eig.vectors(0, k) * eig.vectors(0, k);
        return r;
    }();
    return rule;
}

// Panel boundaries over the support, Chebyshev-graded so panels shrink
// toward the band edges the way orthogonal-polynomial nodes cluster there
// (uniform panels lose the high-order recurrence coefficients).  The Purcell
// notch additionally gets boundaries pinned at omega_q +- 5*sigma so it is
// resolved without global refinement.
std::vector<double> panel_boundaries(const SpectralDensity& J, int panels) {
    const auto [lo, hi] = J.support();
    std::vector<double> bounds;
    bounds.reserve(panels + 3);
    for (int p = 0; p <= panels; ++p) {
        const double s = 0.5 * (1.0 - std::cos(M_PI * p / panels));
        bounds.push_back(lo + (hi - lo) * s);
    }
    if (J.kind == BathKind::purcell_notch) {
        for (double cut : {J.notch_omega - 5.0 * J.notch_sigma,
                           J.notch_omega + 5.0 * J.notch_sigma}) {
            if (cut <= lo || cut >= hi) continue;
            auto it = std::lower_bound(bounds.begin(), bounds.end(), cut);
            // snap to an existing boundary when closer than 1% of the notch
            if (std::min(*it - cut, cut - *(it - 1)) > 0.01 * J.notch_sigma)
                bounds.insert(it, cut);
        }
    }
    return bounds;
}

// q-point Gauss rule of the measure J(x)dx restricted to [a, b]: sample the
// panel with a fine Gauss-Legendre rule, run a short Lanczos recursion on it
// and apply Golub-Welsch.  Exact for the first 2q local moments, so panel
// mass and centroid are preserved for every q >= 1.  Falls back to the panel
// midpoint when the panel carries (numerically) no weight.
void local_gauss(const SpectralDensity& J, double a, double b, int q,
                 std::vector<double>& nodes_out, std::vector<double>& weights_out) {
    const GaussRule& gl = gauss_legendre_32();
    const int m = static_cast<int>(gl.node.size());
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);

    Eigen::VectorXd x(m), v(m);
    double mass = 0.0;
    for (int k = 0; k < m; ++k) {
        x[k] = mid + half * gl.node[k];
        v[k] = std::max(half * gl.weight[k] * J(x[k]), 0.0);
        mass += v[k];
    }
    if (mass <= 1e-300) {
        for (int i = 0; i < q; ++i) {
            nodes_out.push_back(a + (b - a) * (i + 0.5) / q);
            weights_out.push_back(0.0);
        }
        return;
    }

    // Lanczos on diag(x) seeded with sqrt(v), q steps
    Eigen::VectorXd alpha(q), beta(q - 1 > 0 ? q - 1 : 0);
    Eigen::MatrixXd V(m, q);
    V.col(0) = v.cwiseSqrt() / std::sqrt(mass);
    Eigen::VectorXd w(m);
    for (int j = 0; j < q; ++j) {
        w = x.cwiseProduct(V.col(j));
        alpha[j] = V.col(j).dot(w);
        if (j + 1 == q) break;
        w -= alpha[j] * V.col(j);
        if (j > 0) w -= beta[j - 1] * V.col(j - 1);
        auto basis = V.leftCols(j + 1);
        w -= basis * (basis.transpose() * w);
        const double nrm = w.norm();
        if (nrm <= 1e-14) {
            // measure cannot support q points; park the surplus at the
            // midpoint with zero weight
            TridiagEig eig = tridiag_eig(alpha.head(j + 1), beta.head(j), true);
            for (int k = 0; k <= j; ++k) {
                nodes_out.push_back(eig.values[k]);
                weights_out.push_back(mass * eig.vectors(0, k) * eig.vectors(0, k));
            }
            for (int k = j + 1; k < q; ++k) {
                nodes_out.push_back(mid);
                weights_out.push_back(0.0);
            }
            return;
        }
        beta[j] = nrm;
        V.col(j + 1) = w / nrm;
    }

    TridiagEig eig = tridiag_eig(alpha, beta, true);
    for (int k = 0; k < q; ++k) {
        nodes_out.push_back(eig.values[k]);
        weights_out.push_back(mass * eig.vectors(0, k) * eig.vectors(0, k));
    }
}

} // namespace

double DiscretizedBath::total_weight() const {
    return std::accumulate(weight.begin(), weight.end(), 0.0);
}

DiscretizedBath discretize(const SpectralDensity& J, int mode_count) {
    J.validate();
    if (mode_count < 1) throw ConfigError("discretize requires at least one mode");

    // composite rule: P panels carrying local Gauss rules of J(omega)domega,
    // point counts as even as possible, q <= 8 per panel
    const int q_max = 8;
    const int panels = (mode_count + q_max - 1) / q_max;
    const std::vector<double> bounds = panel_boundaries(J, panels);
    const int P = static_cast<int>(bounds.size()) - 1;

    std::vector<int> q(P, mode_count / P);
    for (int r = 0; r < mode_count % P; ++r) ++q[r];

    DiscretizedBath bath;
    bath.omega.reserve(mode_count);
    bath.weight.reserve(mode_count);
    for (int p = 0; p < P; ++p) {
        if (q[p] == 0) continue;
        local_gauss(J, bounds[p], bounds[p + 1], q[p], bath.omega, bath.weight);
    }
    return bath;
}

double integrate_against(const SpectralDensity& J, int panels, double (*f)(double)) {
    const std::vector<double> bounds = panel_boundaries(J, panels);
    const GaussRule& gl = gauss_legendre_32();
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
        const double half = 0.5 * (bounds[p + 1] - bounds[p]);
        const double mid = 0.5 * (bounds[p + 1] + bounds[p]);
        double acc = 0.0;
        for (int k = 0; k < gl.node.size(); ++k) {
            const double x = mid + half * gl.node[k];
            acc += gl.weight[k] * J(x) * f(x);
        }
        total += half * acc;
    }
    return total;
}

} // namespace chainqed
