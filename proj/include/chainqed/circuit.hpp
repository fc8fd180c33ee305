// circuit.hpp — undriven circuit-QED system: Hamiltonian, dressed basis, rates

#pragma once

#include <utility>
#include <vector>

#include "chainqed/chain_mapping.hpp"
#include "chainqed/local_ops.hpp"
#include "chainqed/spectral_density.hpp"

namespace chainqed {

// All scalars in table units (GHz).  lambda is the reorganization-energy
// counterterm; eps_d / omega_d describe the readout drive
// eps_d * sin(omega_d * t) * (a + a^dag).
struct CircuitParams {
    double omega_q = 5.304;
    double omega_a = 7.5;
    double g = 0.3165;
    double lambda = 0.0;
    double eps_d = 0.0;
    double omega_d = 0.0;
    double kappa = 0.05;

    double delta() const { return omega_a - omega_q; }
    double sigma() const { return omega_a + omega_q; }

    // warns (stderr) when |g/delta| >= 0.5; throws on invalid fields
    void validate() const;
};

// H_S = (wq/2) sz + wa a^dag a + g sx (a+a^dag) + lambda (a+a^dag)^2 on the
// qubit (x) resonator space, basis |j,n> with index j*d_a + n.  Matrix is in
// angular units (rad/ns): table coefficients times 2*pi.
MatrixXc build_undriven_hamiltonian(const CircuitParams& p, int d_a);

// Eigen-decomposition of H_S with |j-bar n> labels assigned by maximum
// overlap against bare product states, greedy in ascending bare energy.
struct DressedBasis {
    Eigen::VectorXd energies; // all 2*d_a eigenvalues, table units (GHz), ascending
    MatrixXc states;          // eigenvectors as columns, phase-fixed
    int d_a = 0;
    int d_label = 0;
    std::vector<int> label_to_index; // (j, n) -> eigenindex at j*d_label + n

    int index_of(int j, int n) const;
    VectorXc state_of(int j, int n) const;
    double energy_of(int j, int n) const; // GHz
};

// d_label defaults to min(8, d_a - 4) when <= 0 is passed.
DressedBasis dressed_basis(const MatrixXc& H, int d_a, int d_label = 0);

// Dressed qubit observable and resonator population (Eq.-(4)-style sums over
// labeled states); dimensionless matrices on the full 2*d_a space.
std::pair<MatrixXc, MatrixXc> dressed_projectors(const DressedBasis& basis);

// Fock cutoffs for the resonator and the chain sites.
struct TruncationRule {
    int d_a = 0;
    int d_chain = 0;
    double nbar_a = 0.0;
    double nbar_chain = 0.0;
};

// d_a = ceil(10 + 7 sqrt(nbar_a) + nbar_a) with nbar_a = 4 eps_d^2/kappa^2,
// d_chain = ceil(2 + 5 nbar_chain) with nbar_chain = (t0/k0) nbar_a.
TruncationRule truncation_dims(double eps_d, double kappa,
                               const ChainCoefficients& chain);

// Golden-rule decay rate 2*pi*J(gap)*g^2*|1/Delta + 1/Sigma|^2, table units
// (GHz); multiply by 2*pi for the exponential-decay rate in 1/ns.  The J
// argument is omega_q, or the dressed |1-bar 0> -> |0-bar 0> gap when a basis
// is supplied.
double fgr_rate(const CircuitParams& p, const SpectralDensity& J);
double fgr_rate(const CircuitParams& p, const SpectralDensity& J,
                const DressedBasis& basis);

// Lindblad-model rates (Gamma10, Gamma01) = (kappa g^2/Delta^2, kappa g^2/Sigma^2).
std::pair<double, double> lindblad_rates(const CircuitParams& p);

} // namespace chainqed
