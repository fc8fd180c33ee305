#include "chainqed/bath_observables.hpp"

#include <algorithm>
#include <cmath>

#include "chainqed/common.hpp"
#include "chainqed/linalg.hpp"

namespace chainqed {

double StarSpectrum::total() const {
    double sum = 0.0;
    for (double v : occupancy) sum += v;
    return sum;
}

int StarSpectrum::argmax_in(double lo, double hi) const {
    int best = -1;
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (omega[k] < lo || omega[k] > hi) continue;
        if (best < 0 || occupancy[k] > occupancy[best]) best = static_cast<int>(k);
    }
    return best;
}

StarSpectrum star_occupations(const MatrixXc& chain_correlator,
                              const ChainCoefficients& sim_chain,
                              const ChainCoefficients& padded_chain) {
    const int N = static_cast<int>(chain_correlator.rows());
    const int M = padded_chain.size();
    if (chain_correlator.cols() != N)
        throw NumericalError("star_occupations: correlator must be square");
    if (N > sim_chain.size() || M < N)
        throw NumericalError("star_occupations: padded chain shorter than correlator");
    for (int i = 0; i < N; ++i) {
        if (std::abs(sim_chain.e[i] - padded_chain.e[i]) > 1e-9 ||
            (i + 1 < N && std::abs(sim_chain.t[i] - padded_chain.t[i]) > 1e-9))
            throw NumericalError(
                "star_occupations: padded chain does not extend the simulated chain");
    }

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(padded_chain.e.data(), M);
    Eigen::VectorXd sub =
        M > 1 ? Eigen::Map<const Eigen::VectorXd>(padded_chain.t.data(), M - 1)
              : Eigen::VectorXd();
    TridiagEig eig = tridiag_eig(diag, sub, true);

    // occupancies n_k = (V^T C_pad V)_kk; only the first N rows of V matter
    StarSpectrum spec;
    spec.padded_size = M;
    spec.omega.assign(eig.values.data(), eig.values.data() + M);
    spec.occupancy.resize(M);
    const MatrixXc slab = chain_correlator * eig.vectors.topRows(N).cast<Complex>();
    for (int k = 0; k < M; ++k) {
        const Complex nk = eig.vectors.col(k).head(N).cast<Complex>().adjoint() * slab.col(k);
        spec.occupancy[k] = nk.real();
    }
    return spec;
}

double saturation_error(const MPS& psi, int site) {
    const int d = psi.tensor(site).dim();
    MatrixXc comm = ops::annihilate(d) * ops::create(d) - ops::number(d);
    return 1.0 - psi.expect_site(site, comm).real();
}

double parabolic_peak(const std::vector<double>& x, const std::vector<double>& y, int k) {
    const int n = static_cast<int>(x.size());
    if (k <= 0 || k + 1 >= n) return x[std::clamp(k, 0, n - 1)];
    // local quadratic through the three points; handles nonuniform grids
    const double x0 = x[k - 1], x1 = x[k], x2 = x[k + 1];
    const double y0 = y[k - 1], y1 = y[k], y2 = y[k + 1];
    const double d1 = (y1 - y0) / (x1 - x0);
    const double d2 = (y2 - y1) / (x2 - x1);
    const double curv = (d2 - d1) / (0.5 * (x2 - x0));
    if (!(curv < 0.0)) return x[k]; // not a local maximum
    const double slope_mid = 0.5 * (d1 + d2);
    const double xm = 0.5 * (x0 + x2);
    const double refined = xm - slope_mid / curv;
    return std::clamp(refined, x0, x2);
}

} // namespace chainqed
