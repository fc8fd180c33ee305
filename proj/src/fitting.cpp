#include "chainqed/fitting.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "chainqed/common.hpp"

namespace chainqed {

DecayFit fit_decay_to_plateau(const std::vector<double>& t, const std::vector<double>& y) {
    const int n = static_cast<int>(t.size());
    if (n < 20) throw FitError("decay fit needs at least 20 samples");

    const double ymax = *std::max_element(y.begin(), y.end());
    const double ymin = *std::min_element(y.begin(), y.end());
    const double range = ymax - ymin;
    if (range < 1e-12) return {0.0, -y.front(), 0.0};

    // the series must head toward its plateau: reject rises beyond tolerance
    double running_min = y.front(), worst_rise = 0.0;
    for (double v : y) {
        worst_rise = std::max(worst_rise, v - running_min);
        running_min = std::min(running_min, v);
    }
    if (worst_rise > 0.25 * range)
        throw FitError("series is not monotonically decaying (rise " +
                       std::to_string(worst_rise) + " vs range " + std::to_string(range) + ")");

    // seeds: plateau from the last sample, rate from a log-linear fit
    double c = -y.back() + 0.1 * range;
    double gamma = 0.0;
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (int i = 0; i < n; ++i) {
            const double z = (y[i] + c) / (1.0 + c);
            if (z <= 1e-12) continue;
            const double l = std::log(z);
            sx += t[i];
            sy += l;
            sxx += t[i] * t[i];
            sxy += t[i] * l;
            ++m;
        }
        if (m >= 2 && sxx * m - sx * sx > 0.0)
            gamma = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
        gamma = std::max(gamma, 1e-6);
    }

    // Gauss-Newton with step damping on (gamma, c)
    auto rms = [&](double g, double cc) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = (1.0 + cc) * std::exp(-g * t[i]) - cc - y[i];
            acc += r * r;
        }
        return std::sqrt(acc / n);
    };

    double best = rms(gamma, c);
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (int i = 0; i < n; ++i) {
            const double e = std::exp(-gamma * t[i]);
            const double r = (1.0 + c) * e - c - y[i];
            const double dg = -(1.0 + c) * t[i] * e;
            const double dc = e - 1.0;
            jtj(0, 0) += dg * dg;
            jtj(0, 1) += dg * dc;
            jtj(1, 0) += dc * dg;
            jtj(1, 1) += dc * dc;
            jtr[0] += dg * r;
            jtr[1] += dc * r;
        }
        jtj(0, 0) *= 1.0 + 1e-12;
        jtj(1, 1) *= 1.0 + 1e-12;
        const Eigen::Vector2d step = jtj.ldlt().solve(jtr);
        double scale = 1.0;
        bool improved = false;
        for (int half = 0; half < 20; ++half) {
            const double g2 = gamma - scale * step[0];
            const double c2 = c - scale * step[1];
            const double v = rms(g2, c2);
            if (v < best) {
                gamma = g2;
                c = c2;
                best = v;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved || step.cwiseAbs().maxCoeff() < 1e-14) break;
    }

    DecayFit fit;
    fit.gamma = gamma;
    fit.plateau = c;
    fit.residual = best / range;
    if (fit.residual > 0.05)
        throw FitError("decay fit residual " + std::to_string(fit.residual) +
                       " exceeds 0.05");
    return fit;
}

ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (y[i] <= 0.0) continue;
        const double w = y[i]; // damp the noisy tail
        const double l = std::log(y[i]);
        sw += w;
        sx += w * t[i];
        sy += w * l;
        sxx += w * t[i] * t[i];
        sxy += w * t[i] * l;
    }
    const double det = sw * sxx - sx * sx;
    if (sw <= 0.0 || det <= 0.0) throw FitError("exponential fit needs positive data");
    ExpFit fit;
    fit.gamma = -(sw * sxy - sx * sy) / det;
    fit.amplitude = std::exp((sy - (-fit.gamma) * sx) / sw);
    return fit;
}

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
    const double n = static_cast<double>(t.size());
    if (t.size() < 2) throw FitError("line fit needs at least 2 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sx += t[i];
        sy += y[i];
        sxx += t[i] * t[i];
        sxy += t[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det <= 0.0) throw FitError("degenerate abscissa in line fit");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

void window_series(const std::vector<double>& x, const std::vector<double>& y, double lo,
                   double hi, std::vector<double>& xw, std::vector<double>& yw) {
    xw.clear();
    yw.clear();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        xw.push_back(x[i]);
        yw.push_back(y[i]);
    }
}

} // namespace chainqed
