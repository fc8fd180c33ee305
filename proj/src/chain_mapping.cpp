#include "chainqed/chain_mapping.hpp"

#include <cmath>
#include <iostream>

#include "chainqed/common.hpp"
#include "chainqed/linalg.hpp"

namespace chainqed {

Eigen::MatrixXd ChainCoefficients::jacobi_matrix(int n) const {
    if (n < 1 || n > size()) throw NumericalError("jacobi_matrix: invalid truncation");
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) T(i, i) = e[i];
    for (int i = 0; i + 1 < n; ++i) T(i, i + 1) = T(i + 1, i) = t[i];
    return T;
}

ChainCoefficients chain_map(const DiscretizedBath& bath, int chain_length) {
    const int M = bath.mode_count();
    if (chain_length < 1) throw ConfigError("chain length must be >= 1");
    if (chain_length > M)
        throw NumericalError("chain length exceeds the number of bath modes");
    for (double w : bath.weight)
        if (w < 0.0) throw NumericalError("negative bath weight");

    const Eigen::Map<const Eigen::VectorXd> omega(bath.omega.data(), M);
    Eigen::VectorXd seed(M);
    for (int k = 0; k < M; ++k) seed[k] = std::sqrt(bath.weight[k]);
    const double k0 = seed.norm();
    if (!(k0 > 0.0)) throw NumericalError("bath has zero total weight");

    ChainCoefficients chain;
    chain.k0 = k0;
    chain.e.reserve(chain_length);
    chain.t.reserve(chain_length - 1);

    // Lanczos on diag(omega) with full reorthogonalization (two passes).
    Eigen::MatrixXd V(M, chain_length);
    V.col(0) = seed / k0;
    Eigen::VectorXd w(M);
    for (int j = 0; j < chain_length; ++j) {
        w = omega.cwiseProduct(V.col(j));
        const double alpha = V.col(j).dot(w);
        chain.e.push_back(alpha);
        if (j + 1 == chain_length) break;

        w -= alpha * V.col(j);
        if (j > 0) w -= chain.t[j - 1] * V.col(j - 1);
        auto basis = V.leftCols(j + 1);
        w -= basis * (basis.transpose() * w);
        w -= basis * (basis.transpose() * w);

        const double beta = w.norm();
        if (beta <= 1e-10 * k0)
            throw NumericalError("Lanczos breakdown at chain site " + std::to_string(j + 1));
        V.col(j + 1) = w / beta;

        const double ortho = (basis.transpose() * V.col(j + 1)).cwiseAbs().maxCoeff();
        if (ortho > 1e-10)
            throw NumericalError("Lanczos lost orthogonality at chain site " +
                                 std::to_string(j + 1));
        chain.t.push_back(beta);
    }
    return chain;
}

StarDecomposition star_decomposition(const ChainCoefficients& chain,
                                     bool want_transform) {
    const int n = chain.size();
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(chain.e.data(), n);
    Eigen::VectorXd sub =
        n > 1 ? Eigen::Map<const Eigen::VectorXd>(chain.t.data(), n - 1) : Eigen::VectorXd();
    TridiagEig eig = tridiag_eig(diag, sub, true);

    StarDecomposition star;
    star.omega.assign(eig.values.data(), eig.values.data() + n);
    star.weight.resize(n);
    for (int k = 0; k < n; ++k)
        star.weight[k] = chain.k0 * chain.k0 * eig.vectors(0, k) * eig.vectors(0, k);
    if (want_transform) star.transform = std::move(eig.vectors);
    return star;
}

std::vector<double> jacobi_eigenvalues(const ChainCoefficients& chain) {
    const int n = chain.size();
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(chain.e.data(), n);
    Eigen::VectorXd sub =
        n > 1 ? Eigen::Map<const Eigen::VectorXd>(chain.t.data(), n - 1) : Eigen::VectorXd();
    TridiagEig eig = tridiag_eig(diag, sub, false);
    return {eig.values.data(), eig.values.data() + n};
}

double mean_eigenvalue_spacing(const ChainCoefficients& chain) {
    const std::vector<double> lam = jacobi_eigenvalues(chain);
    if (lam.size() < 2) return 0.0;
    return (lam.back() - lam.front()) / static_cast<double>(lam.size() - 1);
}

double default_broadening(const ChainCoefficients& chain) {
    return 3.0 * mean_eigenvalue_spacing(chain);
}

namespace {

double kernel_value(BroadenKernel kernel, double x, double eta) {
    if (kernel == BroadenKernel::gaussian) {
        static const double inv_sqrt_2pi = 0.3989422804014327;
        const double z = x / eta;
        return inv_sqrt_2pi / eta * std::exp(-0.5 * z * z);
    }
    return eta / (M_PI * (x * x + eta * eta));
}

} // namespace

std::vector<double> reconstruct_sdf(const ChainCoefficients& chain, double eta,
                                    BroadenKernel kernel,
                                    const std::vector<double>& grid) {
    const int n = chain.size();
    const StarDecomposition star = star_decomposition(chain);

    const double spacing =
        n > 1 ? (star.omega.back() - star.omega.front()) / (n - 1) : 0.0;
    if (eta < spacing)
        std::cerr << "[chainqed] warning: broadening eta = " << eta
                  << " below mean eigenvalue spacing " << spacing << "\n";

    std::vector<double> J(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k)
            acc += star.weight[k] * kernel_value(kernel, grid[i] - star.omega[k], eta);
        J[i] = acc;
    }
    return J;
}

ChainCoefficients resonator_extended_chain(const ChainCoefficients& chain,
                                           double omega_a, double g) {
    ChainCoefficients ext;
    ext.k0 = g;
    ext.e.reserve(chain.e.size() + 1);
    ext.t.reserve(chain.t.size() + 1);
    ext.e.push_back(omega_a);
    ext.e.insert(ext.e.end(), chain.e.begin(), chain.e.end());
    ext.t.push_back(chain.k0);
    ext.t.insert(ext.t.end(), chain.t.begin(), chain.t.end());
    return ext;
}

std::vector<double> effective_filtered_sdf(const ChainCoefficients& chain,
                                           double omega_a, double g, double eta,
                                           const std::vector<double>& grid) {
    return reconstruct_sdf(resonator_extended_chain(chain, omega_a, g), eta,
                           BroadenKernel::gaussian, grid);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
    return x;
}

} // namespace chainqed
