// spectral_density.hpp — parametrized bath spectral densities J(omega)

#pragma once

#include <string>
#include <utility>

namespace chainqed {

enum class BathKind { flat, ohmic, purcell_notch };

std::string to_string(BathKind kind);
BathKind bath_kind_from_string(const std::string& name);

// J(omega) in table units: omega in GHz, J in GHz.  J vanishes for omega < 0
// and outside the compact support.
struct SpectralDensity {
    BathKind kind = BathKind::ohmic;
    double alpha = 0.0;       // dimensionless prefactor of the table form
    double omega_min = 0.0;   // flat band lower edge (GHz)
    double omega_max = 0.0;   // flat band upper edge (GHz)
    double omega_c = 0.0;     // ohmic hard cutoff (GHz)
    double notch_depth = 0.0; // D in [0,1)
    double notch_sigma = 0.0; // sigma (GHz)
    double notch_omega = 0.0; // notch center, nominally the qubit frequency (GHz)

    static SpectralDensity flat(double alpha, double omega_min, double omega_max);
    static SpectralDensity ohmic(double alpha, double omega_c);
    static SpectralDensity purcell_notch(double alpha, double omega_c, double depth,
                                         double sigma, double omega_notch);

    double operator()(double omega) const;

    // support interval [lo, hi]; J == 0 outside
    std::pair<double, double> support() const;

    void validate() const;
};

// Rescales alpha so that 2*pi*J(omega_a) = kappa holds exactly.
// Throws NumericalError if J(omega_a) == 0 (calibration impossible).
SpectralDensity calibrate_prefactor(const SpectralDensity& shape, double kappa,
                                    double omega_a);

// lambda = \int_0^inf J(omega)/omega domega, by the same panel quadrature as
// discretize().  Throws NumericalError when the integrand diverges.
double reorganization_energy(const SpectralDensity& J);

} // namespace chainqed
