// common.hpp — shared constants and error categories
//
// Unit conventions used throughout:
//   * scalar frequencies, couplings and rates are stored in "table units":
//     ordinary frequency in GHz, i.e. nu = omega / (2*pi);
//   * Hamiltonian matrices are assembled in angular units (rad/ns), so every
//     table-unit coefficient picks up a factor 2*pi at build time;
//   * time is in ns.  Hence kappa*t/(2*pi) = kappa[GHz] * t[ns].

#pragma once

#include <stdexcept>
#include <string>

namespace chainqed {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// config / input validation problems (CLI exit code 2)
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// numerical breakdowns: quadrature, Lanczos, labeling, positivity, ... (exit 3)
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// curve-fit quality failures (exit 4)
struct FitError : std::runtime_error {
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace chainqed
