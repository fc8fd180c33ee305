#include "chainqed/spectral_density.hpp"

#include <cmath>

#include "chainqed/bath_discretization.hpp"
#include "chainqed/common.hpp"

namespace chainqed {

std::string to_string(BathKind kind) {
    switch (kind) {
        case BathKind::flat: return "flat";
        case BathKind::ohmic: return "ohmic";
        case BathKind::purcell_notch: return "purcell_notch";
    }
    return "?";
}

BathKind bath_kind_from_string(const std::string& name) {
    if (name == "flat") return BathKind::flat;
    if (name == "ohmic") return BathKind::ohmic;
    if (name == "purcell_notch" || name == "pf") return BathKind::purcell_notch;
    throw ConfigError("unknown bath kind '" + name + "'");
}

SpectralDensity SpectralDensity::flat(double alpha, double omega_min, double omega_max) {
    SpectralDensity J;
    J.kind = BathKind::flat;
    J.alpha = alpha;
    J.omega_min = omega_min;
    J.omega_max = omega_max;
    J.validate();
    return J;
}

SpectralDensity SpectralDensity::ohmic(double alpha, double omega_c) {
    SpectralDensity J;
    J.kind = BathKind::ohmic;
    J.alpha = alpha;
    J.omega_c = omega_c;
    J.validate();
    return J;
}

SpectralDensity SpectralDensity::purcell_notch(double alpha, double omega_c, double depth,
                                               double sigma, double omega_notch) {
    SpectralDensity J;
    J.kind = BathKind::purcell_notch;
    J.alpha = alpha;
    J.omega_c = omega_c;
    J.notch_depth = depth;
    J.notch_sigma = sigma;
    J.notch_omega = omega_notch;
    J.validate();
    return J;
}

void SpectralDensity::validate() const {
    if (alpha < 0.0) throw ConfigError("spectral density prefactor must be >= 0");
    switch (kind) {
        case BathKind::flat:
            if (!(omega_min < omega_max))
                throw ConfigError("flat band requires omega_min < omega_max");
            break;
        case BathKind::ohmic:
            if (!(omega_c > 0.0)) throw ConfigError("ohmic cutoff must be > 0");
            break;
        case BathKind::purcell_notch:
            if (!(omega_c > 0.0)) throw ConfigError("ohmic cutoff must be > 0");
            if (notch_depth < 0.0 || notch_depth >= 1.0)
                throw ConfigError("notch depth must satisfy 0 <= D < 1");
            if (!(notch_sigma > 0.0)) throw ConfigError("notch sigma must be > 0");
            break;
    }
}

double SpectralDensity::operator()(double omega) const {
    if (omega < 0.0) return 0.0;
    switch (kind) {
        case BathKind::flat:
            return (omega >= omega_min && omega <= omega_max) ? 2.0 * alpha : 0.0;
        case BathKind::ohmic:
            return (omega <= omega_c) ? 2.0 * alpha * omega : 0.0;
        case BathKind::purcell_notch: {
            if (omega > omega_c) return 0.0;
            const double d = (omega - notch_omega) / notch_sigma;
            return 2.0 * alpha * omega * (1.0 - notch_depth * std::exp(-0.5 * d * d));
        }
    }
    return 0.0;
}

std::pair<double, double> SpectralDensity::support() const {
    if (kind == BathKind::flat) return {omega_min, omega_max};
    return {0.0, omega_c};
}

SpectralDensity calibrate_prefactor(const SpectralDensity& shape, double kappa,
                                    double omega_a) {
    if (!(kappa > 0.0)) throw ConfigError("kappa must be > 0");
    SpectralDensity J = shape;
    if (J.alpha <= 0.0) J.alpha = 1.0;
    const double value = J(omega_a);
    if (value <= 0.0)
        throw NumericalError("calibration impossible: J(omega_a) = 0 at omega_a = " +
                             std::to_string(omega_a));
    J.alpha *= kappa / (two_pi * value);
    return J;
}

double reorganization_energy(const SpectralDensity& J) {
    J.validate();
    if (J.alpha == 0.0) return 0.0;
    const auto [lo, hi] = J.support();
    // J(omega)/omega must stay integrable at the lower edge; the ohmic forms
    // vanish linearly there, the flat band must exclude omega = 0.
    if (lo <= 0.0 && J.kind == BathKind::flat)
        throw NumericalError("reorganization energy diverges: flat band touches omega = 0");
    (void)hi;
    return integrate_against(J, 512, [](double omega) { return 1.0 / omega; });
}

} // namespace chainqed
