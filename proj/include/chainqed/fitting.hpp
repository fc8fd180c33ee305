// fitting.hpp — least-squares extraction of rates from time series

#pragma once

#include <vector>

namespace chainqed {

struct DecayFit {
    double gamma = 0.0;    // 1/ns
    double plateau = 0.0;  // the c in (1+c) exp(-gamma t) - c
    double residual = 0.0; // RMS / (max - min) of the data in the window
};

// Fits y(t) = (1+c) exp(-gamma t) - c (amplitude pinned to y(0) = 1, the
// dressed initial value of Sigma_z).  Throws FitError when the normalized
// residual exceeds 0.05 or the series rises against the decay direction by
// more than a quarter of its range.  A constant series returns gamma = 0.
DecayFit fit_decay_to_plateau(const std::vector<double>& t, const std::vector<double>& y);

struct ExpFit {
    double amplitude = 0.0;
    double gamma = 0.0; // 1/ns
};

// weighted log-linear fit of y ~ A exp(-gamma t); requires y > 0
ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y);

// ordinary least-squares slope/intercept
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y);

// window helper: keeps samples with lo <= x[i] <= hi
void window_series(const std::vector<double>& x, const std::vector<double>& y, double lo,
                   double hi, std::vector<double>& xw, std::vector<double>& yw);

} // namespace chainqed
