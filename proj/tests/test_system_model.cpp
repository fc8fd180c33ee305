#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "chainqed/bath_discretization.hpp"
#include "chainqed/chain_mapping.hpp"
#include "chainqed/circuit.hpp"
#include "chainqed/common.hpp"
#include "chainqed/local_ops.hpp"
#include "chainqed/spectral_density.hpp"

using namespace chainqed;

namespace {

CircuitParams paper_params() {
    CircuitParams p;
    p.omega_q = 5.304;
    p.omega_a = 7.5;
    p.g = 0.3165;
    p.kappa = 0.05;
    p.lambda = 0.0;
    return p;
}

MatrixXc parity_operator(int d_a) {
    MatrixXc qubit = MatrixXc::Zero(2, 2);
    qubit(0, 0) = 1.0;
    qubit(1, 1) = -1.0; // exp(i pi sigma+ sigma-)
    MatrixXc res = MatrixXc::Zero(d_a, d_a);
    for (int n = 0; n < d_a; ++n) res(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return ops::kron(qubit, res);
}

} // namespace

TEST_CASE("decoupled Hamiltonian has product spectrum") {
    CircuitParams p = paper_params();
    p.g = 0.0;
    const int d_a = 12;
    MatrixXc H = build_undriven_hamiltonian(p, d_a);

    std::vector<double> expected;
    for (int j = 0; j < 2; ++j)
        for (int n = 0; n < d_a; ++n)
            expected.push_back(two_pi * ((j - 0.5) * p.omega_q + n * p.omega_a));
    std::sort(expected.begin(), expected.end());

    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(H);
    for (int k = 0; k < 2 * d_a; ++k)
        CHECK(solver.eigenvalues()[k] == doctest::Approx(expected[k]).epsilon(1e-12));
}

TEST_CASE("Hamiltonian is Hermitian and parity conserving") {
    CircuitParams p = paper_params();
    p.lambda = 0.0159;
    const int d_a = 20;
    MatrixXc H = build_undriven_hamiltonian(p, d_a);
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    MatrixXc P = parity_operator(d_a);
    const double scale = H.cwiseAbs().maxCoeff();
    CHECK((H * P - P * H).cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("dressed gap matches the Bloch-Siegert-corrected dispersive estimate") {
    CircuitParams p = paper_params();
    MatrixXc H = build_undriven_hamiltonian(p, 60);
    DressedBasis basis = dressed_basis(H, 60);
    const double gap = basis.energy_of(1, 0) - basis.energy_of(0, 0);
    const double estimate =
        p.omega_q - p.g * p.g * (1.0 / p.delta() + 1.0 / p.sigma());
    CHECK(std::abs(gap - estimate) / estimate < 0.01);
}

TEST_CASE("labeling: identity at g = 0, perturbative overlaps at paper params") {
    CircuitParams p = paper_params();

    SUBCASE("g = 0") {
        p.g = 0.0;
        const int d_a = 12;
        DressedBasis basis = dressed_basis(build_undriven_hamiltonian(p, d_a), d_a, 6);
        for (int j = 0; j < 2; ++j)
            for (int n = 0; n < 6; ++n) {
                VectorXc v = basis.state_of(j, n);
                CHECK(std::abs(v[j * d_a + n]) == doctest::Approx(1.0).epsilon(1e-12));
            }
    }

    SUBCASE("paper parameters") {
        const int d_a = 30;
        DressedBasis basis = dressed_basis(build_undriven_hamiltonian(p, d_a), d_a);

        // |<01|0-bar 1>|^2 > 0.97 (admixture (g/Delta)^2 ~ 0.021)
        VectorXc v01 = basis.state_of(0, 1);
        const double overlap = std::norm(v01[0 * d_a + 1]);
        CHECK(overlap > 0.97);

        // |0-bar 0> has <11| component -g/Sigma ~ -0.0247 (counter-rotating)
        VectorXc v00 = basis.state_of(0, 0);
        const Complex c11 = v00[1 * d_a + 1];
        CHECK(std::abs(c11.imag()) < 1e-10);
        CHECK(c11.real() == doctest::Approx(-p.g / p.sigma()).epsilon(0.05));

        // |1-bar 0> has <01| component -g/Delta
        VectorXc v10 = basis.state_of(1, 0);
        const Complex c01 = v10[0 * d_a + 1];
        CHECK(c01.real() == doctest::Approx(-p.g / p.delta()).epsilon(0.05));

        // labeled states carry definite excitation parity
        MatrixXc P = parity_operator(d_a);
        for (int j = 0; j < 2; ++j)
            for (int n = 0; n < basis.d_label; ++n) {
                VectorXc v = basis.state_of(j, n);
                const double pexp = (v.adjoint() * P * v)(0).real();
                CHECK(std::abs(std::abs(pexp) - 1.0) < 1e-10);
            }

        // bijection onto the lowest eigenstates (holds in this regime)
        std::vector<int> used(basis.label_to_index);
        std::sort(used.begin(), used.end());
        for (int k = 0; k < 2 * basis.d_label; ++k) CHECK(used[k] == k);
    }
}

TEST_CASE("labeled energies are insensitive to the Fock cutoff") {
    CircuitParams p = paper_params();
    p.lambda = 0.0159;
    DressedBasis a = dressed_basis(build_undriven_hamiltonian(p, 30), 30);
    DressedBasis b = dressed_basis(build_undriven_hamiltonian(p, 40), 40);
    for (int j = 0; j < 2; ++j)
        for (int n = 0; n <= 3; ++n)
            CHECK(std::abs(a.energy_of(j, n) - b.energy_of(j, n)) < 1e-9);
}

TEST_CASE("dressed projectors") {
    CircuitParams p = paper_params();

    SUBCASE("g = 0 reduces to sigma_z and bare number") {
        p.g = 0.0;
        const int d_a = 10;
        DressedBasis basis = dressed_basis(build_undriven_hamiltonian(p, d_a), d_a, 6);
        auto [sigma, node] = dressed_projectors(basis);
        MatrixXc bare = ops::kron(ops::sigma_z(), ops::identity(d_a));
        // restricted to labeled columns n < 6
        for (int j = 0; j < 2; ++j)
            for (int n = 0; n < 6; ++n) {
                const int i = j * d_a + n;
                CHECK(std::abs(sigma(i, i) - bare(i, i)) < 1e-12);
                CHECK(std::abs(node(i, i) - Complex(n)) < 1e-12);
            }
    }

    SUBCASE("paper parameters") {
        const int d_a = 30;
        DressedBasis basis = dressed_basis(build_undriven_hamiltonian(p, d_a), d_a);
        auto [sigma, node] = dressed_projectors(basis);

        CHECK((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((node - node.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

        VectorXc v00 = basis.state_of(0, 0);
        CHECK((v00.adjoint() * sigma * v00)(0).real() == doctest::Approx(-1.0).epsilon(1e-12));

        const int K = basis.d_label;
        CHECK(node.trace().real() == doctest::Approx(K * (K - 1.0)).epsilon(1e-12));

        // Sigma_z^2 is the projector onto the labeled subspace
        MatrixXc proj = sigma * sigma;
        CHECK((proj * proj - proj).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(proj.trace().real() == doctest::Approx(2.0 * K).epsilon(1e-12));
    }
}

TEST_CASE("truncation rule") {
    SpectralDensity flat =
        calibrate_prefactor(SpectralDensity::flat(1.0, 3.0, 12.0), 0.05, 7.5);
    ChainCoefficients chain = chain_map(discretize(flat, 400), 40);

    TruncationRule at_half_kappa = truncation_dims(0.025, 0.05, chain);
    CHECK(at_half_kappa.nbar_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at_half_kappa.d_a == 18);

    TruncationRule undriven = truncation_dims(0.0, 0.05, chain);
    CHECK(undriven.d_a == 10);
    CHECK(undriven.d_chain == 2);

    // d_chain from the computed coefficients: ceil(2 + 5*(t0/k0)*nbar_a)
    const double expected =
        std::ceil(2.0 + 5.0 * (chain.t[0] / chain.k0) * at_half_kappa.nbar_a);
    CHECK(at_half_kappa.d_chain == static_cast<int>(expected));
}

TEST_CASE("closed-form rates") {
    CircuitParams p = paper_params();
    SpectralDensity flat =
        calibrate_prefactor(SpectralDensity::flat(1.0, 3.0, 12.0), p.kappa, p.omega_a);

    const double gamma = fgr_rate(p, flat);
    CHECK(gamma * 1e3 == doctest::Approx(1.43).epsilon(0.005)); // MHz

    auto [g10, g01] = lindblad_rates(p);
    CHECK(g10 * 1e3 == doctest::Approx(1.04).epsilon(0.005));
    CHECK(g01 * 1e3 == doctest::Approx(0.0306).epsilon(0.005));

    // deep notch kills the rate
    SpectralDensity pf = SpectralDensity::purcell_notch(1.0, 15.0, 0.999999, 1e-6, p.omega_q);
    CHECK(fgr_rate(p, pf) < 1e-4 * fgr_rate(p, SpectralDensity::ohmic(1.0, 15.0)));

    // notch suppression factor 1 - D at the qubit frequency
    SpectralDensity ohm =
        calibrate_prefactor(SpectralDensity::ohmic(1.0, 15.0), p.kappa, p.omega_a);
    SpectralDensity notch = SpectralDensity::purcell_notch(ohm.alpha, 15.0, 0.7, 0.1, p.omega_q);
    CHECK(fgr_rate(p, notch) / fgr_rate(p, ohm) == doctest::Approx(0.3).epsilon(1e-6));

    // dropping the counter-rotating 1/Sigma term recovers the Lindblad rate
    // for a flat spectrum: 2 pi J g^2 / Delta^2 = kappa g^2 / Delta^2
    const double without_sigma = two_pi * flat(p.omega_q) * p.g * p.g / (p.delta() * p.delta());
    CHECK(without_sigma == doctest::Approx(g10).epsilon(1e-12));

    // flat J: the dressed-gap variant agrees (J constant over the band)
    const int d_a = 30;
    DressedBasis basis = dressed_basis(build_undriven_hamiltonian(p, d_a), d_a);
    CHECK(fgr_rate(p, flat, basis) == doctest::Approx(gamma).epsilon(1e-12));

    CircuitParams off = p;
    off.g = 0.0;
    auto [z10, z01] = lindblad_rates(off);
    CHECK(z10 == 0.0);
    CHECK(z01 == 0.0);
}
