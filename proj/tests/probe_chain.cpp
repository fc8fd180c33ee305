// temporary numeric probe (not a test)
#include <cmath>
#include <cstdio>
#include <vector>

#include <Eigen/Dense>

#include "chainqed/bath_discretization.hpp"
#include "chainqed/chain_mapping.hpp"
#include "chainqed/linalg.hpp"
#include "chainqed/spectral_density.hpp"

using namespace chainqed;

namespace {

// local Gauss rule of J dx on [a,b] with q points (32-pt GL inner)
void local_gauss(const SpectralDensity& J, double a, double b, int q,
                 std::vector<double>& nodes, std::vector<double>& weights) {
    static Eigen::VectorXd gn, gw;
    if (gn.size() == 0) {
        const int m = 32;
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(m), sub(m - 1);
        for (int k = 1; k < m; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
        TridiagEig eig = tridiag_eig(diag, sub, true);
        gn = eig.values;
        gw.resize(m);
        for (int k = 0; k < m; ++k) gw[k] = 2.0 * eig.vectors(0, k) * eig.vectors(0, k);
    }
    const int m = gn.size();
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    Eigen::VectorXd x(m), v(m);
    double mass = 0;
    for (int k = 0; k < m; ++k) {
        x[k] = mid + half * gn[k];
        v[k] = std::max(half * gw[k] * J(x[k]), 0.0);
        mass += v[k];
    }
    if (mass <= 1e-300) {
        for (int i = 0; i < q; ++i) { nodes.push_back(mid); weights.push_back(0); }
        return;
    }
    Eigen::VectorXd alpha(q), beta(std::max(q - 1, 0));
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
        beta[j] = w.norm();
        V.col(j + 1) = w / beta[j];
    }
    TridiagEig eig = tridiag_eig(alpha, beta, true);
    for (int k = 0; k < q; ++k) {
        nodes.push_back(eig.values[k]);
        weights.push_back(mass * eig.vectors(0, k) * eig.vectors(0, k));
    }
}

DiscretizedBath disc_variant(const SpectralDensity& J, int M, int q, bool cheb) {
    const int P = (M + q - 1) / q;
    auto [lo, hi] = J.support();
    std::vector<double> bounds(P + 1);
    for (int p = 0; p <= P; ++p) {
        double s = double(p) / P;
        if (cheb) s = 0.5 * (1.0 - std::cos(M_PI * s));
        bounds[p] = lo + (hi - lo) * s;
    }
    std::vector<int> qs(P, M / P);
    for (int r = 0; r < M % P; ++r) ++qs[r];
    DiscretizedBath b;
    for (int p = 0; p < P; ++p)
        if (qs[p] > 0) local_gauss(J, bounds[p], bounds[p + 1], qs[p], b.omega, b.weight);
    return b;
}

void report(const char* tag, const SpectralDensity& J, int N, int M, int q, bool cheb) {
    DiscretizedBath bath = disc_variant(J, M, q, cheb);
    ChainCoefficients c = chain_map(bath, N);
    double worst_e = 0, worst_t = 0;
    int at_e = 0, at_t = 0;
    for (int n = 0; n < N; ++n) {
        double oe = (n == 0) ? 10.0
                             : 7.5 * (1.0 + 1.0 / ((2.0 * n + 1.0) * (2.0 * n + 3.0)));
        double d = std::abs(c.e[n] - oe);
        if (d > worst_e) { worst_e = d; at_e = n; }
        if (n + 1 < N) {
            double k = n + 1.0;
            double ot = 7.5 * std::sqrt(k * (k + 1.0)) / (2.0 * k + 1.0);
            double dt_ = std::abs(c.t[n] - ot);
            if (dt_ > worst_t) { worst_t = dt_; at_t = n; }
        }
    }
    std::printf("%-8s N=%4d M=%6d q=%2d  e-err=%.3e@%d  t-err=%.3e@%d\n", tag, N, M, q,
                worst_e, at_e, worst_t, at_t);
}

} // namespace

int main() {
    SpectralDensity ohm = calibrate_prefactor(SpectralDensity::ohmic(1.0, 15.0), 0.05, 7.5);
    for (int N : {120, 471}) {
        for (int q : {4, 8, 16}) {
            report("unif", ohm, N, 10 * N, q, false);
            report("cheb", ohm, N, 10 * N, q, true);
        }
    }
    return 0;
}
