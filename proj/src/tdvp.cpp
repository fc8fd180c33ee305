#include "chainqed/tdvp.hpp"

#include <cmath>

#include "chainqed/bath_observables.hpp"
#include "chainqed/common.hpp"

namespace chainqed {

namespace {

using Env = std::vector<MatrixXc>; // one (out, in) matrix per MPO channel

Env boundary_env() { return Env{MatrixXc::Ones(1, 1)}; }

// L'[w'] = sum_{w, pb, p} W(w,w')(pb,p) A[pb]^H L[w] A[p]
Env update_left(const Env& L, const SiteTensor& a, const MPOTensor& w) {
    const int cr = a.chi_right();
    Env out(w.w_right);
    std::vector<MatrixXc> lefts(a.dim());
    for (const MPOBlock& b : w.block) {
        if (L[b.row].size() == 0 || b.nz.empty()) continue;
        MatrixXc acc = MatrixXc::Zero(cr, cr);
        for (int p = 0; p < a.dim(); ++p) lefts[p].resize(0, 0);
        for (const auto& e : b.nz)
            if (lefts[e.p].size() == 0) lefts[e.p].noalias() = L[b.row] * a.slice[e.p];
        for (const auto& e : b.nz)
            acc.noalias() += e.c * (a.slice[e.pb].adjoint() * lefts[e.p]);
        if (out[b.col].size() == 0)
            out[b.col] = std::move(acc);
        else
            out[b.col] += acc;
    }
    return out;
}

// R'[w] = sum_{w', pb, p} W(w,w')(pb,p) conj(A[pb]) R[w'] A[p]^T
Env update_right(const Env& R, const SiteTensor& a, const MPOTensor& w) {
    const int cl = a.chi_left();
    Env out(w.w_left);
    std::vector<MatrixXc> rights(a.dim());
    for (const MPOBlock& b : w.block) {
        if (R[b.col].size() == 0 || b.nz.empty()) continue;
        MatrixXc acc = MatrixXc::Zero(cl, cl);
        for (int p = 0; p < a.dim(); ++p) rights[p].resize(0, 0);
        for (const auto& e : b.nz)
            if (rights[e.p].size() == 0)
                rights[e.p].noalias() = R[b.col] * a.slice[e.p].transpose();
        for (const auto& e : b.nz)
            acc.noalias() += e.c * (a.slice[e.pb].conjugate() * rights[e.p]);
        if (out[b.row].size() == 0)
            out[b.row] = std::move(acc);
        else
            out[b.row] += acc;
    }
    return out;
}

// effective one-site Hamiltonian: (H A)_pb = sum W(w,w')(pb,p) L[w] A_p R[w']^T
struct EffectiveSite {
    const Env* L;
    const Env* R;
    const MPOTensor* W;
    int cl, d, cr;

    // scratch reused across Krylov iterations
    mutable std::vector<MatrixXc> U;  // per (w, p): L[w] * A_p
    mutable std::vector<MatrixXc> V;  // per (w', pb)
    mutable std::vector<char> u_set, v_set;
    mutable std::vector<MatrixXc> RT; // per w': R[w']^T

    EffectiveSite(const Env* l, const Env* r, const MPOTensor* w, int chi_l, int dim_p,
                  int chi_r)
        : L(l), R(r), W(w), cl(chi_l), d(dim_p), cr(chi_r),
          U(static_cast<std::size_t>(w->w_left) * dim_p),
          V(static_cast<std::size_t>(w->w_right) * dim_p),
          u_set(U.size()), v_set(V.size()), RT(w->w_right) {
        for (int c = 0; c < w->w_right; ++c)
            if ((*R)[c].size() != 0) RT[c] = (*R)[c].transpose();
    }

    int dim() const { return cl * d * cr; }

    void apply(Eigen::Ref<const VectorXc> in, Eigen::Ref<VectorXc> out) const {
        std::fill(u_set.begin(), u_set.end(), 0);
        std::fill(v_set.begin(), v_set.end(), 0);

        auto slice_in = [&](int p) {
            return Eigen::Map<const MatrixXc>(in.data() + static_cast<std::size_t>(p) * cl * cr,
                                              cl, cr);
        };

        for (const MPOBlock& b : W->block) {
            if ((*L)[b.row].size() == 0 || RT[b.col].size() == 0) continue;
            for (const auto& e : b.nz) {
                const std::size_t ui = static_cast<std::size_t>(b.row) * d + e.p;
                if (!u_set[ui]) {
                    U[ui].noalias() = (*L)[b.row] * slice_in(e.p);
                    u_set[ui] = 1;
                }
                const std::size_t vi = static_cast<std::size_t>(b.col) * d + e.pb;
                if (!v_set[vi]) {
                    V[vi] = e.c * U[ui];
                    v_set[vi] = 1;
                } else {
                    V[vi].noalias() += e.c * U[ui];
                }
            }
        }

        out.setZero();
        for (int w = 0; w < W->w_right; ++w) {
            if (RT[w].size() == 0) continue;
            for (int pb = 0; pb < d; ++pb) {
                if (!v_set[static_cast<std::size_t>(w) * d + pb]) continue;
                Eigen::Map<MatrixXc> o(out.data() + static_cast<std::size_t>(pb) * cl * cr,
                                       cl, cr);
                o.noalias() += V[static_cast<std::size_t>(w) * d + pb] * RT[w];
            }
        }
    }
};

// effective bond Hamiltonian: K(C) = sum_w L[w] C R[w]^T
struct EffectiveBond {
    const Env* L;
    const Env* R;
    int cl, cr;

    int dim() const { return cl * cr; }

    void apply(Eigen::Ref<const VectorXc> in, Eigen::Ref<VectorXc> out) const {
        Eigen::Map<const MatrixXc> c(in.data(), cl, cr);
        Eigen::Map<MatrixXc> o(out.data(), cl, cr);
        o.setZero();
        const std::size_t channels = std::min(L->size(), R->size());
        for (std::size_t w = 0; w < channels; ++w) {
            if ((*L)[w].size() == 0 || (*R)[w].size() == 0) continue;
            o.noalias() += (*L)[w] * c * (*R)[w].transpose();
        }
    }
};

// v <- exp(i * sign * dt * H) v via Lanczos with full reorthogonalization.
// H Hermitian through apply(); converged when successive subspace results
// differ by less than tol * ||v||.
template <typename Op>
void krylov_exp(const Op& op, VectorXc& v, double dt, double sign, int cap, double tol) {
    const double vnorm = v.norm();
    if (vnorm == 0.0) return;
    const int dim = static_cast<int>(v.size());
    const int m_max = std::min(cap, dim);

    thread_local std::vector<Complex> basis_buf, w_buf;
    basis_buf.resize(static_cast<std::size_t>(dim) * m_max);
    w_buf.resize(dim);
    Eigen::Map<MatrixXc> basis(basis_buf.data(), dim, m_max);
    Eigen::Map<VectorXc> w(w_buf.data(), dim);
    Eigen::VectorXd alpha(m_max), beta(m_max);
    basis.col(0) = v / vnorm;
    // superlinear a-priori estimate: the Krylov residual of exp(i tau T) e1
    // after m steps is bounded through prod_i (tau beta_i) / m!
    double decay = 1.0;
    int m = m_max;
    for (int j = 0; j < m_max; ++j) {
        op.apply(basis.col(j), w);
        alpha[j] = basis.col(j).dot(w).real();
        w -= alpha[j] * basis.col(j);
        if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
        auto span = basis.leftCols(j + 1);
        w -= span * (span.adjoint() * w).eval();
        const double b = w.norm();

        decay *= std::abs(dt) * b / (j + 1.0);
        if (b <= 1e-14 || decay < 0.1 * tol) {
            m = j + 1;
            break;
        }
        if (j + 1 == m_max) {
            if (m_max < dim)
                throw NumericalError(
                    "Krylov exponential did not converge: dim " + std::to_string(dim) +
                    ", cap " + std::to_string(cap) + ", dt " + std::to_string(dt) +
                    ", residual estimate " + std::to_string(decay));
            m = m_max;
            break;
        }
        beta[j] = b;
        basis.col(j + 1) = w / b;
    }

    // exponential in the m-dimensional subspace
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) tri(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
    Eigen::VectorXcd phase(m);
    for (int i = 0; i < m; ++i)
        phase[i] = std::exp(Complex(0.0, sign * dt * eig.eigenvalues()[i]));
    Eigen::VectorXcd result =
        eig.eigenvectors().cast<Complex>() *
        (phase.array() * eig.eigenvectors().row(0).transpose().cast<Complex>().array())
            .matrix();
    v = basis.leftCols(m) * (vnorm * result);
}

VectorXc flatten(const SiteTensor& a) {
    VectorXc v(static_cast<Eigen::Index>(a.dim()) * a.chi_left() * a.chi_right());
    const int block = a.chi_left() * a.chi_right();
    for (int p = 0; p < a.dim(); ++p)
        Eigen::Map<MatrixXc>(v.data() + static_cast<std::size_t>(p) * block, a.chi_left(),
                             a.chi_right()) = a.slice[p];
    return v;
}

void unflatten(const VectorXc& v, SiteTensor& a) {
    const int block = a.chi_left() * a.chi_right();
    for (int p = 0; p < a.dim(); ++p)
        a.slice[p] = Eigen::Map<const MatrixXc>(
            v.data() + static_cast<std::size_t>(p) * block, a.chi_left(), a.chi_right());
}

} // namespace

void tdvp1_step(MPS& psi, MPO& mpo, double t_ns, double dt, int krylov_cap,
                double krylov_tol) {
    const int L = psi.length();
    if (psi.center() != 0) psi.move_center_to(0);
    const double half = 0.5 * dt;

    // ---- left-to-right half sweep at the first midpoint -------------------
    mpo.set_drive_time(t_ns + 0.25 * dt);

    std::vector<Env> renv(L + 1);
    renv[L] = boundary_env();
    for (int i = L - 1; i >= 1; --i)
        renv[i] = update_right(renv[i + 1], psi.tensor(i), mpo.tensor(i));

    std::vector<Env> lenv(L + 1);
    lenv[0] = boundary_env();

    Env lcur = boundary_env();
    for (int i = 0; i < L; ++i) {
        SiteTensor& a = psi.tensor(i);
        EffectiveSite h{&lcur, &renv[i + 1], &mpo.tensor(i), a.chi_left(), a.dim(),
                        a.chi_right()};
        VectorXc v = flatten(a);
        krylov_exp(h, v, half, -1.0, krylov_cap, krylov_tol);
        unflatten(v, a);

        if (i + 1 < L) {
            // split off the bond matrix and back-evolve it
            const int cl = a.chi_left(), d = a.dim(), cr = a.chi_right();
            Eigen::HouseholderQR<MatrixXc> qr(a.left_matrix());
            MatrixXc q = qr.householderQ() * MatrixXc::Identity(
                                                 static_cast<Eigen::Index>(d) * cl, cr);
            MatrixXc c = qr.matrixQR().topRows(cr).triangularView<Eigen::Upper>();
            a = SiteTensor::from_left_matrix(q, cl, d);

            Env lnext = update_left(lcur, a, mpo.tensor(i));
            EffectiveBond k{&lnext, &renv[i + 1], cr, cr};
            VectorXc cv = Eigen::Map<VectorXc>(c.data(), c.size());
            krylov_exp(k, cv, half, +1.0, krylov_cap, krylov_tol);
            c = Eigen::Map<MatrixXc>(cv.data(), cr, cr);

            psi.tensor(i + 1).apply_left(c);
            lenv[i + 1] = lnext; // reused by the second half sweep if undriven
            lcur = std::move(lnext);
        }
    }

    // ---- right-to-left half sweep at the second midpoint ------------------
    mpo.set_drive_time(t_ns + 0.75 * dt);

    // left environments: the ones collected above are valid when the MPO did
    // not change (undriven); a driven MPO needs one rebuild pass
    if (mpo.is_driven()) {
        for (int i = 0; i < L - 1; ++i)
            lenv[i + 1] = update_left(lenv[i], psi.tensor(i), mpo.tensor(i));
    }

    Env rcur = boundary_env();
    for (int i = L - 1; i >= 0; --i) {
        SiteTensor& a = psi.tensor(i);
        EffectiveSite h{&lenv[i], &rcur, &mpo.tensor(i), a.chi_left(), a.dim(),
                        a.chi_right()};
        VectorXc v = flatten(a);
        krylov_exp(h, v, half, -1.0, krylov_cap, krylov_tol);
        unflatten(v, a);

        if (i > 0) {
            const int cl = a.chi_left(), d = a.dim(), cr = a.chi_right();
            Eigen::HouseholderQR<MatrixXc> qr(a.right_matrix().adjoint());
            MatrixXc q = (qr.householderQ() *
                          MatrixXc::Identity(static_cast<Eigen::Index>(d) * cr, cl))
                             .adjoint();
            MatrixXc c = MatrixXc(qr.matrixQR().topRows(cl).triangularView<Eigen::Upper>())
                             .adjoint();
            a = SiteTensor::from_right_matrix(q, d, cr);

            Env rnext = update_right(rcur, a, mpo.tensor(i));
            EffectiveBond k{&lenv[i], &rnext, cl, cl};
            VectorXc cv = Eigen::Map<VectorXc>(c.data(), c.size());
            krylov_exp(k, cv, half, +1.0, krylov_cap, krylov_tol);
            c = Eigen::Map<MatrixXc>(cv.data(), cl, cl);

            psi.tensor(i - 1).apply_right(c);
            rcur = std::move(rnext);
        }
    }
    // all tensors right of site 0 are right-orthonormal again: center is 0,
    // which matches the bookkeeping set by the initial move_center_to(0)
}

namespace {

// fast observable paths assuming right-canonical structure with center at 0
Complex expect_pair_canonical(const MPS& psi, const MatrixXc& pair_op) {
    const SiteTensor& a = psi.tensor(0);
    const SiteTensor& b = psi.tensor(1);
    const int d0 = a.dim(), d1 = b.dim();
    Complex value = 0.0;
    std::vector<MatrixXc> cross(static_cast<std::size_t>(d0) * d0);
    for (int pb = 0; pb < d0; ++pb)
        for (int p = 0; p < d0; ++p)
            cross[pb * d0 + p] = a.slice[pb].adjoint() * a.slice[p];
    for (int pb0 = 0; pb0 < d0; ++pb0)
        for (int pb1 = 0; pb1 < d1; ++pb1)
            for (int p0 = 0; p0 < d0; ++p0)
                for (int p1 = 0; p1 < d1; ++p1) {
                    const Complex c = pair_op(pb0 * d1 + pb1, p0 * d1 + p1);
                    if (c == Complex(0.0)) continue;
                    value += c * (b.slice[pb1].adjoint() * cross[pb0 * d0 + p0] *
                                  b.slice[p1])
                                 .trace();
                }
    return value;
}

double saturation_canonical(const MPS& psi) {
    const SiteTensor& a = psi.tensor(0);
    const SiteTensor& b = psi.tensor(1);
    const int d1 = b.dim();
    // <[a, a^dag]> = 1 - d1 * p_top with truncated operators
    MatrixXc l = MatrixXc::Zero(a.chi_right(), a.chi_right());
    for (int p = 0; p < a.dim(); ++p) l.noalias() += a.slice[p].adjoint() * a.slice[p];
    Complex top = (b.slice[d1 - 1].adjoint() * l * b.slice[d1 - 1]).trace();
    return d1 * top.real();
}

} // namespace

ObservableSeries evolve(const MPS& psi0, MPO mpo, const EvolutionConfig& cfg,
                        const MatrixXc& sigma_z_pair, const MatrixXc& n_a_pair,
                        const std::function<void(const MPS&, long, double)>& snapshot) {
    if (cfg.dt <= 0.0) throw ConfigError("dt must be > 0");
    if (cfg.record_stride < 1) throw ConfigError("record stride must be >= 1");

    MPS psi = embed_bonds(psi0, cfg.chi);
    const long steps = static_cast<long>(std::llround(cfg.t_final / cfg.dt));

    ObservableSeries series;
    double prev_norm = psi.norm();

    auto record = [&](long s) {
        const double t = s * cfg.dt;
        series.step.push_back(s);
        series.t_ns.push_back(t);
        series.kt_over_2pi.push_back(cfg.kappa * t);
        series.sigma_z.push_back(expect_pair_canonical(psi, sigma_z_pair).real());
        series.n_a.push_back(expect_pair_canonical(psi, n_a_pair).real());
        const double dsat = saturation_canonical(psi);
        series.delta_sat.push_back(dsat);
        if (dsat > cfg.delta_sat_threshold) series.delta_sat_flag = true;
        series.max_bond_entropy.push_back(cfg.record_entropy
                                              ? psi.max_entanglement_entropy()
                                              : 0.0);
        if (cfg.record_energy) {
            mpo.set_drive_time(t);
            series.energy.push_back(mpo_expectation(psi, mpo).real());
        }
        const double n = psi.norm();
        series.max_norm_drift = std::max(series.max_norm_drift, std::abs(1.0 - n * n));
        if (snapshot) snapshot(psi, s, t);
    };

    record(0);
    for (long s = 1; s <= steps; ++s) {
        tdvp1_step(psi, mpo, (s - 1) * cfg.dt, cfg.dt, cfg.krylov_cap, cfg.krylov_tol);
        const double n = psi.norm();
        series.max_step_norm_change = std::max(series.max_step_norm_change,
                                               std::abs(n - prev_norm));
        if (std::abs(n - prev_norm) > 1e-8)
            throw NumericalError("TDVP norm jumped by " + std::to_string(n - prev_norm) +
                                 " at step " + std::to_string(s));
        prev_norm = n;
        if (s % cfg.record_stride == 0 || s == steps) record(s);
    }

    if (!cfg.checkpoint_path.empty()) psi.save(cfg.checkpoint_path);
    return series;
}

std::vector<double> chain_occupations(const MPS& psi, const SiteLayout& layout) {
    MPS copy = psi;
    copy.move_center_to(2);
    std::vector<double> occ(layout.n_chain);
    const MatrixXc& num = ops::number(layout.d_chain);
    for (int k = 0; k < layout.n_chain; ++k) {
        const int s = layout.chain_site(k);
        copy.move_center_to(s);
        const SiteTensor& a = copy.tensor(s);
        Complex v = 0.0;
        for (int pb = 0; pb < a.dim(); ++pb)
            for (int p = 0; p < a.dim(); ++p) {
                const Complex c = num(pb, p);
                if (c == Complex(0.0)) continue;
                v += c * (a.slice[pb].adjoint() * a.slice[p]).trace();
            }
        occ[k] = v.real();
    }
    return occ;
}

} // namespace chainqed
