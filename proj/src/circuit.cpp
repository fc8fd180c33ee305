#include "chainqed/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "chainqed/common.hpp"

namespace chainqed {

void CircuitParams::validate() const {
    if (omega_q <= 0.0 || omega_a <= 0.0) throw ConfigError("frequencies must be > 0");
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (kappa <= 0.0) throw ConfigError("kappa must be > 0");
    if (eps_d < 0.0) throw ConfigError("drive amplitude must be >= 0");
    const double ratio = std::abs(g / delta());
    if (ratio >= 0.5)
        std::cerr << "[chainqed] warning: |g/Delta| = " << ratio
                  << " outside the dispersive regime\n";
}

MatrixXc build_undriven_hamiltonian(const CircuitParams& p, int d_a) {
    if (d_a < 2) throw ConfigError("resonator dimension must be >= 2");
    const MatrixXc iq = ops::identity(2);
    const MatrixXc ir = ops::identity(d_a);
    MatrixXc H = 0.5 * p.omega_q * ops::kron(ops::sigma_z(), ir);
    H += p.omega_a * ops::kron(iq, ops::number(d_a));
    H += p.g * ops::kron(ops::sigma_x(), ops::position(d_a));
    H += p.lambda * ops::kron(iq, ops::position_sq(d_a));
    return two_pi * H;
}

namespace {

// global phase fixed so the largest-magnitude component is real positive
void fix_phase(Eigen::Ref<VectorXc> v) {
    int imax = 0;
    double best = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best == 0.0) return;
    v *= std::conj(v[imax]) / best;
}

} // namespace

int DressedBasis::index_of(int j, int n) const {
    if (j < 0 || j > 1 || n < 0 || n >= d_label)
        throw NumericalError("dressed state (" + std::to_string(j) + "," +
                             std::to_string(n) + ") is not labeled");
    return label_to_index[j * d_label + n];
}

VectorXc DressedBasis::state_of(int j, int n) const { return states.col(index_of(j, n)); }

double DressedBasis::energy_of(int j, int n) const { return energies[index_of(j, n)]; }

DressedBasis dressed_basis(const MatrixXc& H, int d_a, int d_label) {
    const int dim = 2 * d_a;
    if (H.rows() != dim || H.cols() != dim)
        throw ConfigError("Hamiltonian dimension does not match d_a");
    if (d_label <= 0) d_label = std::min(8, d_a - 4);
    if (d_label < 1 || d_label > d_a - 2)
        throw ConfigError("d_label must satisfy 1 <= d_label <= d_a - 2");

    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(H);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigendecomposition of H_S failed");

    DressedBasis basis;
    basis.d_a = d_a;
    basis.d_label = d_label;
    basis.energies = solver.eigenvalues() / two_pi;
    basis.states = solver.eigenvectors();
    for (int k = 0; k < dim; ++k) fix_phase(basis.states.col(k));

    // bare states sorted by bare energy (the Hamiltonian's own diagonal in
    // the product basis, so the ordering matches the actual model)
    struct Bare {
        int j, n;
        double energy;
    };
    basis.label_to_index.assign(2 * d_label, -1);
    std::vector<Bare> order;
    for (int j = 0; j < 2; ++j)
        for (int n = 0; n < d_label; ++n)
            order.push_back({j, n, H(j * d_a + n, j * d_a + n).real()});
    std::sort(order.begin(), order.end(), [](const Bare& a, const Bare& b) {
        return a.energy < b.energy;
    });

    std::vector<bool> claimed(dim, false);
    for (const Bare& b : order) {
        const int bare_index = b.j * d_a + b.n;
        int best = -1;
        double best_overlap = -1.0;
        for (int k = 0; k < dim; ++k) {
            const double o = std::abs(basis.states(bare_index, k));
            if (o > best_overlap + 1e-15) {
                best_overlap = o;
                best = k;
            }
        }
        if (best < 0 || claimed[best])
            throw NumericalError("ambiguous dressed-state labeling: eigenstate " +
                                 std::to_string(best) + " claimed twice");
        if (best_overlap * best_overlap <= 0.5)
            throw NumericalError("dressed-state labeling failed: overlap^2 <= 0.5 for (" +
                                 std::to_string(b.j) + "," + std::to_string(b.n) + ")");
        claimed[best] = true;
        basis.label_to_index[b.j * d_label + b.n] = best;
    }
    return basis;
}

std::pair<MatrixXc, MatrixXc> dressed_projectors(const DressedBasis& basis) {
    const int dim = 2 * basis.d_a;
    MatrixXc sigma = MatrixXc::Zero(dim, dim);
    MatrixXc number = MatrixXc::Zero(dim, dim);
    for (int n = 0; n < basis.d_label; ++n) {
        const VectorXc up = basis.state_of(1, n);
        const VectorXc down = basis.state_of(0, n);
        sigma += up * up.adjoint() - down * down.adjoint();
        number += static_cast<double>(n) * (up * up.adjoint() + down * down.adjoint());
    }
    return {std::move(sigma), std::move(number)};
}

TruncationRule truncation_dims(double eps_d, double kappa,
                               const ChainCoefficients& chain) {
    if (kappa <= 0.0) throw ConfigError("kappa must be > 0");
    TruncationRule rule;
    rule.nbar_a = 4.0 * eps_d * eps_d / (kappa * kappa);
    rule.d_a = static_cast<int>(std::ceil(10.0 + 7.0 * std::sqrt(rule.nbar_a) + rule.nbar_a));
    const double t0 = chain.t.empty() ? 0.0 : chain.t[0];
    rule.nbar_chain = (chain.k0 > 0.0 ? t0 / chain.k0 : 0.0) * rule.nbar_a;
    rule.d_chain = static_cast<int>(std::ceil(2.0 + 5.0 * rule.nbar_chain));
    return rule;
}

double fgr_rate(const CircuitParams& p, const SpectralDensity& J) {
    const double matrix_element = 1.0 / p.delta() + 1.0 / p.sigma();
    return two_pi * J(p.omega_q) * p.g * p.g * matrix_element * matrix_element;
}

double fgr_rate(const CircuitParams& p, const SpectralDensity& J,
                const DressedBasis& basis) {
    const double gap = basis.energy_of(1, 0) - basis.energy_of(0, 0);
    const double matrix_element = 1.0 / p.delta() + 1.0 / p.sigma();
    return two_pi * J(gap) * p.g * p.g * matrix_element * matrix_element;
}

std::pair<double, double> lindblad_rates(const CircuitParams& p) {
    const double g2 = p.g * p.g;
    return {p.kappa * g2 / (p.delta() * p.delta()), p.kappa * g2 / (p.sigma() * p.sigma())};
}

} // namespace chainqed
