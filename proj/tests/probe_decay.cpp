// temporary probe: resonator Fock populations during the compressed free decay
#include <cstdio>

#include "chainqed/bath_discretization.hpp"
#include "chainqed/bath_observables.hpp"
#include "chainqed/chain_mapping.hpp"
#include "chainqed/circuit.hpp"
#include "chainqed/mpo.hpp"
#include "chainqed/mps.hpp"
#include "chainqed/spectral_density.hpp"
#include "chainqed/tdvp.hpp"

using namespace chainqed;

int main(int argc, char** argv) {
    const int d_a = argc > 1 ? std::atoi(argv[1]) : 6;
    const int chi = argc > 2 ? std::atoi(argv[2]) : 6;
    CircuitParams p;
    p.omega_q = 5.304;
    p.omega_a = 7.5;
    p.g = 0.0;
    p.kappa = 0.5;
    SpectralDensity flat =
        calibrate_prefactor(SpectralDensity::flat(1.0, 3.0, 12.0), p.kappa, p.omega_a);
    const int N = 40;
    ChainCoefficients chain = chain_map(discretize(flat, 10 * N), N);
    SiteLayout layout{N, d_a, 4};
    DressedBasis basis = dressed_basis(build_undriven_hamiltonian(p, d_a), d_a, 3);

    MPS psi = embed_bonds(initial_state(basis, 0, 1, layout), chi);
    MPO mpo = build_mpo(p, chain, layout, 0.0);
    const double dt = 0.0008;
    for (int s = 0; s < 500; ++s) {
        tdvp1_step(psi, mpo, s * dt, dt);
        if ((s + 1) % 100 == 0) {
            std::printf("t=%.3f  dsat(fast)=%.3e dsat(full)=%.3e  pops:", (s + 1) * dt,
                        [&] {
                            MPS c = psi;
                            c.move_center_to(0);
                            return 1.0 - c.expect_site(1, ops::annihilate(d_a) * ops::create(d_a) -
                                                              ops::number(d_a))
                                             .real();
                        }(),
                        saturation_error(psi, 1));
            for (int n = 0; n < d_a; ++n) {
                MatrixXc proj = MatrixXc::Zero(d_a, d_a);
                proj(n, n) = 1.0;
                std::printf(" %.2e", psi.expect_site(1, proj).real());
            }
            std::printf("  norm=%.12f\n", psi.norm());
        }
    }
    return 0;
}
