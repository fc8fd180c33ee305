// tdvp.hpp — one-site TDVP time evolution with Krylov local exponentials

#pragma once

#include <functional>
#include <string>

#include "chainqed/mpo.hpp"
#include "chainqed/mps.hpp"
#include "chainqed/observable_series.hpp"

namespace chainqed {

struct EvolutionConfig {
    double dt = 0.0008;  // ns (kappa*dt/2pi = 4e-5 at kappa = 0.05)
    double t_final = 10.0;
    int chi = 6;
    int krylov_cap = 30;
    double krylov_tol = 1e-12;
    int record_stride = 50;
    double delta_sat_threshold = 1e-6;
    bool record_entropy = true;
    bool record_energy = false;   // useful for undriven drift checks
    std::string checkpoint_path;  // final-state checkpoint when nonempty

    double kappa = 0.05; // table units, for the dimensionless time column
};

// One symmetric sweep: left-to-right then right-to-left, each site advanced
// by exp(-i H_eff dt/2) and each bond back-evolved by exp(+i K_eff dt/2); the
// drive coefficient is refreshed at the midpoint of each half-sweep.
// Precondition: psi canonical with center at site 0; holds again on return.
void tdvp1_step(MPS& psi, MPO& mpo, double t_ns, double dt, int krylov_cap = 30,
                double krylov_tol = 1e-12);

// Evolves to t_final recording Sigma_z / N_a (dressed two-site operators on
// sites 0,1), the saturation error and bond entropies.  psi0 is embedded to
// bond dimension cfg.chi first.  A delta_sat sample beyond threshold flags
// the run (it does not abort).  The optional snapshot callback fires at every
// record point after the observables are taken.
ObservableSeries evolve(const MPS& psi0, MPO mpo, const EvolutionConfig& cfg,
                        const MatrixXc& sigma_z_pair, const MatrixXc& n_a_pair,
                        const std::function<void(const MPS&, long, double)>& snapshot = {});

// occupation <n_i> of every chain site (single canonical sweep)
std::vector<double> chain_occupations(const MPS& psi, const SiteLayout& layout);

} // namespace chainqed
