// chain_mapping.hpp — star-to-chain unitary mapping of the discretized bath

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "chainqed/bath_discretization.hpp"

namespace chainqed {

// Three-term recurrence coefficients of the polynomials orthonormal w.r.t.
// the discrete bath measure.  e[i] is the on-site energy of chain site i
// (e[0] is the paper's e_1 = first moment of J / k0^2), t[i] > 0 couples
// sites i and i+1, and k0 = sqrt(integral of J) couples the system to site 0.
// All values in table units (GHz).
struct ChainCoefficients {
    std::vector<double> e;
    std::vector<double> t; // size e.size() - 1
    double k0 = 0.0;

    int size() const { return static_cast<int>(e.size()); }

    // Symmetric tridiagonal Jacobi matrix of the first n sites (n <= size).
    Eigen::MatrixXd jacobi_matrix(int n) const;
};

// Lanczos tridiagonalization of diag(omega_k) seeded with the normalized
// weight vector, with full reorthogonalization at every step.
// Throws NumericalError on N > M or on loss of orthogonality beyond 1e-10.
ChainCoefficients chain_map(const DiscretizedBath& bath, int chain_length);

enum class BroadenKernel { gaussian, lorentzian };

// Star modes recovered from a chain: eigenvalues omega_k of the Jacobi
// matrix, weights w_k = k0^2 |v1^(k)|^2, and (optionally) the orthogonal
// transform V with b_k = sum_n V(n,k) c_n.
struct StarDecomposition {
    std::vector<double> omega;
    std::vector<double> weight;
    Eigen::MatrixXd transform; // empty unless requested
};

StarDecomposition star_decomposition(const ChainCoefficients& chain,
                                     bool want_transform = false);

// Eigenvalues of the N x N Jacobi matrix (the star-mode frequencies).
std::vector<double> jacobi_eigenvalues(const ChainCoefficients& chain);

double mean_eigenvalue_spacing(const ChainCoefficients& chain);

// Default broadening: 3x the mean eigenvalue spacing.
double default_broadening(const ChainCoefficients& chain);

// Spectral density reconstructed from chain coefficients: diagonalize the
// Jacobi matrix, attach weights w_k = k0^2 |v1^(k)|^2 to the eigenfrequencies
// and convolve with a normalized kernel of width eta on the given grid.
// Warns (stderr) if eta is below the mean eigenvalue spacing.
std::vector<double> reconstruct_sdf(const ChainCoefficients& chain, double eta,
                                    BroadenKernel kernel,
                                    const std::vector<double>& grid);

// Chain extended by the readout resonator: on-site omega_a, coupled with the
// old k0 to the old first site, with new system coupling g.  Reconstructing
// this chain gives the resonator-filtered spectral density seen by the qubit.
// The inversion treats every bond as excitation conserving, while the
// resonator-to-chain coupling in the simulated model is dipolar; the result
// is therefore a qualitative tool (peak/dip structure), not an exact J.
ChainCoefficients resonator_extended_chain(const ChainCoefficients& chain,
                                           double omega_a, double g);

std::vector<double> effective_filtered_sdf(const ChainCoefficients& chain,
                                           double omega_a, double g, double eta,
                                           const std::vector<double>& grid);

// Evenly spaced grid helper [lo, hi] with n points.
std::vector<double> linspace(double lo, double hi, int n);

} // namespace chainqed
