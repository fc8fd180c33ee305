#include "chainqed/mpo.hpp"

#include <cmath>

#include "chainqed/common.hpp"

namespace chainqed {

void MPOBlock::rebuild_nz() {
    nz.clear();
    for (int p = 0; p < op.cols(); ++p)
        for (int pb = 0; pb < op.rows(); ++pb)
            if (op(pb, p) != Complex(0.0)) nz.push_back({pb, p, op(pb, p)});
}

void MPO::set_drive_time(double t_ns) {
    if (drive_block_ < 0) return;
    const double coeff = eps_angular_ * std::sin(omega_d_angular_ * t_ns);
    MPOBlock& b = site_[drive_site_].block[drive_block_];
    b.op = static_onsite_ + coeff * drive_op_;
    b.rebuild_nz();
}

MPO build_mpo(const CircuitParams& p, const ChainCoefficients& chain,
              const SiteLayout& layout, double t_ns) {
    if (layout.n_chain != chain.size())
        throw ConfigError("layout chain length does not match chain coefficients");
    if (layout.d_a < 2 || layout.d_chain < 2)
        throw ConfigError("local dimensions must be >= 2");

    const int N = layout.n_chain;
    MPO mpo;
    mpo.site_.resize(layout.length());

    // qubit row: [I, 2*pi*g*sx, 2*pi*(wq/2)*sz]
    {
        MPOTensor& w = mpo.site_[0];
        w.w_left = 1;
        w.w_right = 3;
        w.d = 2;
        w.block.push_back({0, 0, ops::identity(2)});
        w.block.push_back({0, 1, two_pi * p.g * ops::sigma_x()});
        w.block.push_back({0, 2, two_pi * 0.5 * p.omega_q * ops::sigma_z()});
    }

    // resonator: channels [before, sx, after] -> [before, Xa, after]
    {
        const int d = layout.d_a;
        MPOTensor& w = mpo.site_[1];
        w.w_left = 3;
        w.w_right = 3;
        w.d = d;
        const MatrixXc& x = ops::position(d);
        mpo.static_onsite_ =
            two_pi * (p.omega_a * ops::number(d) + p.lambda * ops::position_sq(d));
        mpo.drive_op_ = x;
        mpo.eps_angular_ = two_pi * p.eps_d;
        mpo.omega_d_angular_ = two_pi * p.omega_d;
        w.block.push_back({0, 0, ops::identity(d)});
        w.block.push_back({0, 1, two_pi * chain.k0 * x});
        w.block.push_back({0, 2, mpo.static_onsite_});
        mpo.drive_block_ = static_cast<int>(w.block.size()) - 1;
        w.block.push_back({1, 2, x});
        w.block.push_back({2, 2, ops::identity(d)});
    }

    // chain sites: channels [before, c, cdag, after] along the chain; the
    // first chain site receives [before, Xa, after] from the resonator
    const int d = layout.d_chain;
    const MatrixXc& c = ops::annihilate(d);
    const MatrixXc& cdag = ops::create(d);
    const MatrixXc& x = ops::position(d);
    const MatrixXc& num = ops::number(d);
    for (int k = 0; k < N; ++k) {
        MPOTensor& w = mpo.site_[layout.chain_site(k)];
        w.d = d;
        const bool first = (k == 0);
        const bool last = (k == N - 1);
        w.w_left = first ? 3 : 4;
        w.w_right = last ? 1 : 4;
        const int in_after = first ? 2 : 3;
        const int out_after = last ? 0 : 3;

        if (last) {
            w.block.push_back({0, 0, two_pi * chain.e[k] * num});
            if (first) {
                w.block.push_back({1, 0, x});
            } else {
                w.block.push_back({1, 0, cdag});
                w.block.push_back({2, 0, c});
            }
            w.block.push_back({in_after, 0, ops::identity(d)});
        } else {
            w.block.push_back({0, 0, ops::identity(d)});
            w.block.push_back({0, 1, two_pi * chain.t[k] * c});
            w.block.push_back({0, 2, two_pi * chain.t[k] * cdag});
            w.block.push_back({0, out_after, two_pi * chain.e[k] * num});
            if (first) {
                w.block.push_back({1, out_after, x});
            } else {
                w.block.push_back({1, out_after, cdag});
                w.block.push_back({2, out_after, c});
            }
            w.block.push_back({in_after, out_after, ops::identity(d)});
        }
    }

    for (MPOTensor& w : mpo.site_)
        for (MPOBlock& b : w.block) b.rebuild_nz();
    mpo.set_drive_time(t_ns);
    return mpo;
}

MatrixXc MPO::dense() const {
    // contract channels left to right, keeping one dense operator per channel
    std::vector<MatrixXc> env{MatrixXc::Ones(1, 1)};
    for (const MPOTensor& w : site_) {
        std::vector<MatrixXc> next(w.w_right);
        for (const MPOBlock& b : w.block) {
            if (env[b.row].size() == 0) continue;
            MatrixXc term = ops::kron(env[b.row], b.op);
            if (next[b.col].size() == 0)
                next[b.col] = std::move(term);
            else
                next[b.col] += term;
        }
        env = std::move(next);
        if (env.size() > 64) throw NumericalError("dense(): too many channels");
    }
    if (env.size() != 1 || env[0].size() == 0)
        throw NumericalError("dense(): MPO does not terminate in one channel");
    return env[0];
}

Complex mpo_expectation(const MPS& psi, const MPO& H) {
    if (psi.length() != H.length()) throw NumericalError("mpo_expectation: length mismatch");
    // env[w] has shape (bra chi, ket chi)
    std::vector<MatrixXc> env{MatrixXc::Ones(1, 1)};
    for (int i = 0; i < psi.length(); ++i) {
        const SiteTensor& a = psi.tensor(i);
        const MPOTensor& w = H.tensor(i);
        const int cr = a.chi_right();
        std::vector<MatrixXc> next(w.w_right, MatrixXc::Zero(cr, cr));
        std::vector<char> touched(w.w_right, 0);
        for (const MPOBlock& b : w.block) {
            if (env[b.row].size() == 0) continue;
            for (int pb = 0; pb < a.dim(); ++pb)
                for (int pk = 0; pk < a.dim(); ++pk) {
                    const Complex coeff = b.op(pb, pk);
                    if (coeff == Complex(0.0)) continue;
                    next[b.col].noalias() +=
                        coeff * (a.slice[pb].adjoint() * env[b.row] * a.slice[pk]);
                    touched[b.col] = 1;
                }
        }
        for (int c0 = 0; c0 < w.w_right; ++c0)
            if (!touched[c0]) next[c0] = MatrixXc();
        env = std::move(next);
    }
    return env[0](0, 0);
}

} // namespace chainqed
