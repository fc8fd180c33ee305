// bath_discretization.hpp — continuum bath -> finite set of effective modes

#pragma once

#include <vector>

#include "chainqed/spectral_density.hpp"

namespace chainqed {

// Discrete measure sum_k w_k delta(omega - omega_k) approximating J(omega) in
// the quadrature (weak) sense.
struct DiscretizedBath {
    std::vector<double> omega;  // mode frequencies (GHz), strictly increasing
    std::vector<double> weight; // w_k = |g_k|^2 (GHz^2), nonnegative

    int mode_count() const { return static_cast<int>(omega.size()); }
    double total_weight() const;
};

// Composite quadrature of the measure J(omega) domega on its support: M mode
// frequencies/weights distributed over Chebyshev-graded panels, each panel
// carrying the Gauss rule of the restricted measure (so panel mass and
// centroid are exact; with one mode total the single frequency is the measure
// centroid).  Integration error for smooth f is far below the O(1/M^2) bound
// of a plain mode-per-panel rule.  For the Purcell notch the panel layout is
// pinned to omega_q +- 5*sigma so the notch is resolved without global
// refinement.
DiscretizedBath discretize(const SpectralDensity& J, int mode_count);

// Integrates f against J(omega) domega with the same panel layout used by
// discretize(); exposed for the reorganization energy and for tests.
double integrate_against(const SpectralDensity& J, int panels,
                         double (*f)(double));

} // namespace chainqed
