#include "chainqed/lindblad.hpp"

#include <cmath>

#include "chainqed/common.hpp"

namespace chainqed {

namespace {

struct Model {
    MatrixXc h_static; // angular
    MatrixXc x_full;   // a + a^dag
    MatrixXc a_full;
    MatrixXc adag_a;
    MatrixXc comm; // [a, a^dag] truncated, for delta_sat
    double eps_angular;
    double omega_d_angular;
    double kappa_angular;

    MatrixXc hamiltonian(double t_ns) const {
        if (eps_angular == 0.0) return h_static;
        return h_static + (eps_angular * std::sin(omega_d_angular * t_ns)) * x_full;
    }

    MatrixXc rhs(const MatrixXc& rho, double t_ns) const {
        const MatrixXc h = hamiltonian(t_ns);
        MatrixXc out = Complex(0.0, -1.0) * (h * rho - rho * h);
        out.noalias() += kappa_angular * (a_full * rho * a_full.adjoint());
        out.noalias() -= (0.5 * kappa_angular) * (adag_a * rho);
        out.noalias() -= (0.5 * kappa_angular) * (rho * adag_a);
        return out;
    }
};

Model make_model(const CircuitParams& p, int d_a) {
    Model m;
    m.h_static = build_undriven_hamiltonian(p, d_a);
    m.x_full = ops::kron(ops::identity(2), ops::position(d_a));
    m.a_full = ops::kron(ops::identity(2), ops::annihilate(d_a));
    m.adag_a = ops::kron(ops::identity(2), ops::number(d_a));
    m.comm = ops::kron(ops::identity(2),
                       ops::annihilate(d_a) * ops::create(d_a) - ops::number(d_a));
    m.eps_angular = two_pi * p.eps_d;
    m.omega_d_angular = two_pi * p.omega_d;
    m.kappa_angular = two_pi * p.kappa;
    return m;
}

} // namespace

MatrixXc lindblad_rhs(const MatrixXc& rho, const CircuitParams& p, int d_a, double t_ns) {
    return make_model(p, d_a).rhs(rho, t_ns);
}

MatrixXc dressed_projector_state(const DressedBasis& basis, int j, int n) {
    const VectorXc v = basis.state_of(j, n);
    return v * v.adjoint();
}

ObservableSeries lindblad_integrate(const MatrixXc& rho0, const CircuitParams& p,
                                    int d_a, const LindbladConfig& cfg,
                                    const MatrixXc& sigma_z_pair,
                                    const MatrixXc& n_a_pair) {
    if (cfg.dt * two_pi * std::max(p.omega_a, p.omega_q) >= 0.1)
        throw ConfigError("Lindblad dt too coarse for the fastest phase");
    if (rho0.rows() != 2 * d_a || rho0.cols() != 2 * d_a)
        throw ConfigError("density matrix dimension mismatch");

    const Model model = make_model(p, d_a);
    MatrixXc rho = rho0;
    const long steps = static_cast<long>(std::llround(cfg.t_final / cfg.dt));

    ObservableSeries series;
    auto record = [&](long s) {
        const double t = s * cfg.dt;
        series.step.push_back(s);
        series.t_ns.push_back(t);
        series.kt_over_2pi.push_back(cfg.kappa * t);
        series.sigma_z.push_back((sigma_z_pair * rho).trace().real());
        series.n_a.push_back((n_a_pair * rho).trace().real());
        series.delta_sat.push_back(1.0 - (model.comm * rho).trace().real());
        series.max_bond_entropy.push_back(0.0); // column compatibility

        const double trace_err = std::abs(rho.trace().real() - 1.0);
        series.max_norm_drift = std::max(series.max_norm_drift, trace_err);
        if (trace_err > 1e-8)
            throw NumericalError("Lindblad trace drifted by " + std::to_string(trace_err));
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        if (herm > 1e-10)
            throw NumericalError("Lindblad state lost Hermiticity: " + std::to_string(herm));
        Eigen::SelfAdjointEigenSolver<MatrixXc> eig(rho);
        const double min_eig = eig.eigenvalues().minCoeff();
        if (min_eig < -1e-5)
            throw NumericalError("Lindblad positivity violated: min eigenvalue " +
                                 std::to_string(min_eig) + " at t = " + std::to_string(t));
    };

    record(0);
    MatrixXc k1, k2, k3, k4;
    for (long s = 1; s <= steps; ++s) {
        const double t = (s - 1) * cfg.dt;
        const double h = cfg.dt;
        k1 = model.rhs(rho, t);
        k2 = model.rhs(rho + 0.5 * h * k1, t + 0.5 * h);
        k3 = model.rhs(rho + 0.5 * h * k2, t + 0.5 * h);
        k4 = model.rhs(rho + h * k3, t + h);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        // keep exact Hermiticity against roundoff accumulation
        rho = 0.5 * (rho + rho.adjoint().eval());
        if (s % cfg.record_stride == 0 || s == steps) record(s);
    }
    return series;
}

} // namespace chainqed
