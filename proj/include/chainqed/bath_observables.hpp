// bath_observables.hpp — star-basis spectra and resonator saturation error

#pragma once

#include <vector>

#include "chainqed/chain_mapping.hpp"
#include "chainqed/mps.hpp"

namespace chainqed {

// Frequency-resolved occupancies of the bath normal modes.
struct StarSpectrum {
    std::vector<double> omega;     // GHz
    std::vector<double> occupancy; // dimensionless, >= -1e-10
    int padded_size = 0;
    double time_kt_over_2pi = 0.0;

    double total() const;
    // index of the occupancy argmax within [lo, hi]; -1 if the window is empty
    int argmax_in(double lo, double hi) const;
};

// Chain correlator -> star-mode occupancies: embed the N x N correlator into
// the padded chain (zero rows/columns for unpopulated sites), diagonalize the
// padded Jacobi matrix and read diag(U C U^dag) at its eigenfrequencies.
// padded_chain must extend sim_chain (first N coefficients equal to 1e-9).
StarSpectrum star_occupations(const MatrixXc& chain_correlator,
                              const ChainCoefficients& sim_chain,
                              const ChainCoefficients& padded_chain);

// delta_sat = 1 - <[a, a^dag]> evaluated with the truncated ladder operators
// on the given site; grows from ~0 once population reaches the Fock cutoff.
double saturation_error(const MPS& psi, int site);

// three-point parabolic refinement of a peak position around sample k
double parabolic_peak(const std::vector<double>& x, const std::vector<double>& y, int k);

} // namespace chainqed
