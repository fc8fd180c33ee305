#include <doctest.h>

#include <cmath>
#include <vector>

#include "chainqed/bath_discretization.hpp"
#include "chainqed/chain_mapping.hpp"
#include "chainqed/common.hpp"
#include "chainqed/spectral_density.hpp"

using namespace chainqed;

namespace {

constexpr double kappa = 0.05;   // table units (GHz)
constexpr double omega_a = 7.5;  // GHz
constexpr double omega_q = 5.304;

SpectralDensity table_flat() {
    return calibrate_prefactor(SpectralDensity::flat(1.0, 3.0, 12.0), kappa, omega_a);
}
SpectralDensity table_ohmic() {
    return calibrate_prefactor(SpectralDensity::ohmic(1.0, 15.0), kappa, omega_a);
}
SpectralDensity table_purcell() {
    return calibrate_prefactor(
        SpectralDensity::purcell_notch(1.0, 15.0, 0.7, 0.1, omega_q), kappa, omega_a);
}

// Chain coefficients of the continuous measures, used as an independent
// oracle for chain_map.  Flat band -> shifted Legendre; ohmic with hard
// cutoff -> shifted Jacobi with weight x on [0,1] (monic recurrences).
struct Recurrence {
    std::vector<double> e, t;
};

Recurrence legendre_chain(double lo, double hi, int n) {
    Recurrence r;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < n; ++i) r.e.push_back(mid);
    for (int k = 1; k < n; ++k)
        r.t.push_back(half * std::sqrt(k * k / (4.0 * k * k - 1.0)));
    return r;
}

Recurrence ohmic_chain(double omega_c, int n) {
    // Jacobi weight (1-x)^a (1+x)^b with a = 0, b = 1 on [-1, 1]
    Recurrence r;
    const double half = 0.5 * omega_c;
    r.e.push_back(half * (1.0 + 1.0 / 3.0));
    for (int k = 1; k < n; ++k)
        r.e.push_back(half * (1.0 + 1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0))));
    for (int k = 1; k < n; ++k) {
        const double beta = k * (k + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
        r.t.push_back(half * std::sqrt(beta));
    }
    return r;
}

} // namespace

TEST_CASE("J(omega) table forms") {
    SpectralDensity flat = SpectralDensity::flat(0.5, 3.0, 12.0);
    CHECK(flat(5.0) == doctest::Approx(1.0));
    CHECK(flat(2.999) == 0.0);
    CHECK(flat(12.001) == 0.0);
    CHECK(flat(-1.0) == 0.0);

    SpectralDensity ohm = SpectralDensity::ohmic(1.3, 15.0);
    CHECK(ohm(16.0) == 0.0);
    CHECK(ohm(4.0) == doctest::Approx(2.0 * 1.3 * 4.0));

    SpectralDensity pf = table_purcell();
    CHECK(pf(omega_q) == doctest::Approx(2.0 * pf.alpha * omega_q * 0.3));
    CHECK(pf(omega_q) >= 0.0);
    CHECK_THROWS_AS(SpectralDensity::purcell_notch(1.0, 15.0, 1.0, 0.1, omega_q),
                    ConfigError);
}

TEST_CASE("prefactor calibration imposes 2*pi*J(omega_a) = kappa") {
    SpectralDensity ohm = table_ohmic();
    CHECK(ohm.alpha == doctest::Approx(kappa / (4.0 * M_PI * omega_a)).epsilon(1e-12));
    CHECK(two_pi * ohm(omega_a) == doctest::Approx(kappa).epsilon(1e-14));

    SpectralDensity flat = table_flat();
    CHECK(flat.alpha == doctest::Approx(kappa / (4.0 * M_PI)).epsilon(1e-12));
    CHECK(two_pi * flat(omega_a) == doctest::Approx(kappa).epsilon(1e-14));

    SpectralDensity pf = table_purcell();
    CHECK(two_pi * pf(omega_a) == doctest::Approx(kappa).epsilon(1e-14));

    CHECK_THROWS_AS(calibrate_prefactor(SpectralDensity::flat(1.0, 3.0, 12.0), kappa, 2.0),
                    NumericalError);
}

TEST_CASE("discretize reproduces the measure moments") {
    SpectralDensity flat = SpectralDensity::flat(0.5, 3.0, 12.0);
    DiscretizedBath bath = discretize(flat, 900);
    CHECK(bath.mode_count() == 900);
    CHECK(bath.total_weight() == doctest::Approx(9.0).epsilon(1e-8));

    SpectralDensity ohm = table_ohmic();
    DiscretizedBath ob = discretize(ohm, 1500);
    double first = 0.0;
    for (int k = 0; k < ob.mode_count(); ++k) first += ob.weight[k] * ob.omega[k];
    CHECK(first / ob.total_weight() == doctest::Approx(10.0).epsilon(1e-4));

    for (int k = 0; k + 1 < ob.mode_count(); ++k) CHECK(ob.omega[k] < ob.omega[k + 1]);
    for (double w : ob.weight) CHECK(w >= 0.0);

    // single mode lands on the measure centroid and keeps the zeroth moment
    DiscretizedBath one = discretize(flat, 1);
    CHECK(one.mode_count() == 1);
    CHECK(one.omega[0] == doctest::Approx(7.5).epsilon(1e-12));
    CHECK(one.total_weight() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("chain_map matches the analytic recurrences") {
    SpectralDensity flat = table_flat();
    const int N = 120;
    ChainCoefficients chain = chain_map(discretize(flat, 10 * N), N);

    CHECK(chain.k0 == doctest::Approx(std::sqrt(2.0 * flat.alpha * 9.0)).epsilon(1e-10));
    Recurrence oracle = legendre_chain(3.0, 12.0, N);
    for (int i = 0; i < N; ++i)
        CHECK(chain.e[i] == doctest::Approx(7.5).epsilon(1e-10));
    for (int i = 0; i + 1 < N; ++i)
        CHECK(chain.t[i] == doctest::Approx(oracle.t[i]).epsilon(1e-10));

    SpectralDensity ohm = table_ohmic();
    ChainCoefficients oc = chain_map(discretize(ohm, 10 * N), N);
    Recurrence ooracle = ohmic_chain(15.0, N);
    CHECK(oc.k0 * oc.k0 == doctest::Approx(ohm.alpha * 225.0).epsilon(1e-10));
    for (int i = 0; i < N; ++i)
        CHECK(oc.e[i] == doctest::Approx(ooracle.e[i]).epsilon(1e-10));
    for (int i = 0; i + 1 < N; ++i)
        CHECK(oc.t[i] == doctest::Approx(ooracle.t[i]).epsilon(1e-10));

    CHECK_THROWS_AS(chain_map(discretize(ohm, 10), 11), NumericalError);
}

TEST_CASE("moment identities for all table baths") {
    for (const SpectralDensity& J : {table_flat(), table_ohmic(), table_purcell()}) {
        const int N = 80;
        DiscretizedBath bath = discretize(J, 10 * N);
        ChainCoefficients chain = chain_map(bath, N);
        const double zeroth = integrate_against(J, 2048, [](double) { return 1.0; });
        const double first = integrate_against(J, 2048, [](double w) { return w; });
        CHECK(chain.k0 * chain.k0 == doctest::Approx(zeroth).epsilon(1e-8));
        CHECK(chain.e[0] == doctest::Approx(first / zeroth).epsilon(1e-8));
        for (double t : chain.t) CHECK(t > 0.0);
    }
}

TEST_CASE("chain_map is deterministic") {
    SpectralDensity pf = table_purcell();
    ChainCoefficients a = chain_map(discretize(pf, 600), 60);
    ChainCoefficients b = chain_map(discretize(pf, 600), 60);
    for (int i = 0; i < 60; ++i) CHECK(a.e[i] == b.e[i]);
    for (int i = 0; i + 1 < 60; ++i) CHECK(a.t[i] == b.t[i]);
    CHECK(a.k0 == b.k0);
}

TEST_CASE("Jacobi eigenvalues stay inside the support") {
    for (const SpectralDensity& J : {table_flat(), table_ohmic(), table_purcell()}) {
        ChainCoefficients chain = chain_map(discretize(J, 500), 50);
        const auto [lo, hi] = J.support();
        for (double lam : jacobi_eigenvalues(chain)) {
            CHECK(lam >= lo - 1e-9);
            CHECK(lam <= hi + 1e-9);
        }
    }
}

TEST_CASE("ohmic asymptotic plateau approaches (omega_c/2, omega_c/4)") {
    // The approach is O(1/n^2): |e_n - 7.5| = 7.5/((2n+1)(2n+3)) exactly for
    // the continuous measure.  Checked against that rate, not against a flat
    // threshold.
    const int N = 300;
    ChainCoefficients chain = chain_map(discretize(table_ohmic(), 10 * N), N);
    Recurrence oracle = ohmic_chain(15.0, N);
    for (int n = 100; n < N; ++n) {
        const double expected_e = std::abs(oracle.e[n] - 7.5);
        CHECK(std::abs(chain.e[n] - 7.5) < 1.01 * expected_e + 1e-9);
        if (n + 1 < N) {
            const double expected_t = std::abs(oracle.t[n] - 3.75);
            CHECK(std::abs(chain.t[n] - 3.75) < 1.01 * expected_t + 1e-9);
        }
    }
}

TEST_CASE("reorganization energy") {
    SpectralDensity ohm = table_ohmic();
    CHECK(reorganization_energy(ohm) ==
          doctest::Approx(2.0 * ohm.alpha * 15.0).epsilon(1e-10));

    SpectralDensity flat = table_flat();
    CHECK(reorganization_energy(flat) ==
          doctest::Approx(2.0 * flat.alpha * std::log(4.0)).epsilon(1e-10));

    SpectralDensity zero = SpectralDensity::ohmic(0.0, 15.0);
    CHECK(reorganization_energy(zero) == 0.0);

    CHECK_THROWS_AS(reorganization_energy(SpectralDensity::flat(1.0, 0.0, 12.0)),
                    NumericalError);
}

TEST_CASE("spectral density reconstruction round trip") {
    SpectralDensity flat = table_flat();
    const double Jval = 2.0 * flat.alpha;

    auto max_interior_error = [&](int M, int N) {
        ChainCoefficients chain = chain_map(discretize(flat, M), N);
        const double eta = default_broadening(chain);
        // interior excludes the kernel-smeared band edges
        const double margin = std::max(0.9, 3.0 * eta);
        std::vector<double> grid = linspace(3.0 + margin, 12.0 - margin, 301);
        std::vector<double> rec =
            reconstruct_sdf(chain, eta, BroadenKernel::gaussian, grid);
        double worst = 0.0;
        for (double v : rec) worst = std::max(worst, std::abs(v - Jval) / Jval);
        return worst;
    };

    const double coarse = max_interior_error(400, 40);
    const double fine = max_interior_error(1600, 160);
    CHECK(coarse < 0.05);
    CHECK(fine < coarse);

    // single-site chain: one kernel peak at e_1 carrying weight k0^2
    ChainCoefficients single = chain_map(discretize(flat, 200), 1);
    std::vector<double> peak =
        reconstruct_sdf(single, 0.1, BroadenKernel::gaussian, {single.e[0]});
    const double expected = single.k0 * single.k0 / (0.1 * std::sqrt(2.0 * M_PI));
    CHECK(peak[0] == doctest::Approx(expected).epsilon(1e-12));

    // first-component completeness: star weights sum to k0^2
    ChainCoefficients chain = chain_map(discretize(flat, 500), 50);
    StarDecomposition star = star_decomposition(chain);
    double total = 0.0;
    for (double w : star.weight) total += w;
    CHECK(total == doctest::Approx(chain.k0 * chain.k0).epsilon(1e-12));
}

TEST_CASE("resonator-filtered spectral density") {
    const double g = 0.3165;
    SpectralDensity ohm = table_ohmic();
    ChainCoefficients chain = chain_map(discretize(ohm, 1500), 150);

    StarDecomposition star = star_decomposition(resonator_extended_chain(chain, omega_a, g));
    double total = 0.0;
    for (double w : star.weight) total += w;
    CHECK(total == doctest::Approx(g * g).epsilon(1e-12));

    const double eta = default_broadening(chain);
    std::vector<double> grid = linspace(6.5, 8.5, 801);
    std::vector<double> Jeff = effective_filtered_sdf(chain, omega_a, g, eta, grid);
    int argmax = 0;
    for (int i = 1; i < (int)grid.size(); ++i)
        if (Jeff[i] > Jeff[argmax]) argmax = i;
    CHECK(std::abs(grid[argmax] - omega_a) < 2.0 * kappa);

    // Purcell input keeps a dip near the qubit frequency; needs a chain long
    // enough that the default broadening does not wash out the sigma = 0.1
    // notch
    SpectralDensity pf = table_purcell();
    ChainCoefficients pfc = chain_map(discretize(pf, 4000), 400);
    std::vector<double> qgrid = linspace(omega_q - 0.5, omega_q + 0.5, 401);
    std::vector<double> Jpf =
        effective_filtered_sdf(pfc, omega_a, g, default_broadening(pfc), qgrid);
    const double at_notch = Jpf[200];
    const double off_notch = 0.5 * (Jpf.front() + Jpf.back());
    CHECK(at_notch < 0.6 * off_notch);
}
