// mpo.hpp — matrix product operator for the driven qubit/resonator/chain model

#pragma once

#include <vector>

#include "chainqed/chain_mapping.hpp"
#include "chainqed/circuit.hpp"
#include "chainqed/mps.hpp"

namespace chainqed {

// sparse-in-channels site tensor: W(row, col) is a d x d operator block
struct MPOBlock {
    int row = 0;
    int col = 0;
    MatrixXc op;

    struct Entry {
        int pb, p;
        Complex c;
    };
    std::vector<Entry> nz; // nonzero elements of op, kept in sync by rebuild_nz

    void rebuild_nz();
};

struct MPOTensor {
    int w_left = 1;
    int w_right = 1;
    int d = 0;
    std::vector<MPOBlock> block;
};

// H(t) = (wq/2) sz + wa n_a + g sx (a+a^dag) + lambda (a+a^dag)^2
//      + eps_d sin(wd t) (a+a^dag)
//      + k0 (a+a^dag)(c0+c0^dag) + sum_i e_i n_i + t_i (c_{i+1}^dag c_i + h.c.)
// in angular units; only the resonator on-site block depends on t.
class MPO {
  public:
    int length() const { return static_cast<int>(site_.size()); }
    const MPOTensor& tensor(int i) const { return site_[i]; }

    // refresh the drive coefficient eps_d sin(wd t); cheap (one block)
    void set_drive_time(double t_ns);
    bool is_driven() const { return eps_angular_ != 0.0; }

    // dense matrix on the full product space (tests / small systems)
    MatrixXc dense() const;

    friend MPO build_mpo(const CircuitParams& p, const ChainCoefficients& chain,
                         const SiteLayout& layout, double t_ns);

  private:
    std::vector<MPOTensor> site_;
    int drive_site_ = 1;
    int drive_block_ = -1;
    MatrixXc static_onsite_; // angular, resonator
    MatrixXc drive_op_;      // a + a^dag on the resonator
    double eps_angular_ = 0.0;
    double omega_d_angular_ = 0.0;
};

MPO build_mpo(const CircuitParams& p, const ChainCoefficients& chain,
              const SiteLayout& layout, double t_ns = 0.0);

// <psi|H|psi> by channel-resolved transfer contraction
Complex mpo_expectation(const MPS& psi, const MPO& H);

} // namespace chainqed
