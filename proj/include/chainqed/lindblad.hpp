// lindblad.hpp — phenomenological master equation for the driven system

#pragma once

#include "chainqed/circuit.hpp"
#include "chainqed/observable_series.hpp"

namespace chainqed {

struct LindbladConfig {
    double dt = 0.001; // ns; must resolve the fastest phase: dt*2pi*max(w) < 0.1
    double t_final = 10.0;
    int record_stride = 50;
    double kappa = 0.05; // table units; also sets the dissipator strength
};

// drho/dt = -i [H_S(t), rho] + kappa (a rho a^dag - 1/2 {a^dag a, rho}),
// with the same H_S (lambda term and drive included) as the MPS path.
// H and rho in angular/ns units; kappa converted internally.
MatrixXc lindblad_rhs(const MatrixXc& rho, const CircuitParams& p, int d_a, double t_ns);

// fixed-step RK4; records with the provided dressed projectors; throws
// NumericalError if positivity drifts beyond -1e-5.
ObservableSeries lindblad_integrate(const MatrixXc& rho0, const CircuitParams& p,
                                    int d_a, const LindbladConfig& cfg,
                                    const MatrixXc& sigma_z_pair,
                                    const MatrixXc& n_a_pair);

// |j-bar n><j-bar n| on the qubit (x) resonator space
MatrixXc dressed_projector_state(const DressedBasis& basis, int j, int n);

} // namespace chainqed
