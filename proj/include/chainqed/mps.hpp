// mps.hpp — matrix product states for the qubit/resonator/chain layout

#pragma once

#include <string>
#include <vector>

#include "chainqed/circuit.hpp"
#include "chainqed/local_ops.hpp"

namespace chainqed {

// Ordered sites [qubit (d=2), resonator (d_a), chain 0 .. n_chain-1 (d_chain)],
// which keeps every coupling nearest-neighbor.
struct SiteLayout {
    int n_chain = 0;
    int d_a = 0;
    int d_chain = 0;

    int length() const { return n_chain + 2; }
    int dim(int site) const;
    int chain_site(int k) const { return 2 + k; } // chain index -> site index
};

// Rank-3 site tensor with axes (left bond, physical, right bond), stored as
// one chi_l x chi_r matrix per physical index.
struct SiteTensor {
    std::vector<MatrixXc> slice;

    int chi_left() const { return slice.empty() ? 0 : static_cast<int>(slice[0].rows()); }
    int chi_right() const { return slice.empty() ? 0 : static_cast<int>(slice[0].cols()); }
    int dim() const { return static_cast<int>(slice.size()); }

    // fused copies; rows/cols ordered physical-major
    MatrixXc left_matrix() const;  // (d*chi_l) x chi_r, row = p*chi_l + l
    MatrixXc right_matrix() const; // chi_l x (d*chi_r), col = p*chi_r + r
    static SiteTensor from_left_matrix(const MatrixXc& m, int chi_l, int d);
    static SiteTensor from_right_matrix(const MatrixXc& m, int d, int chi_r);

    void scale(Complex factor);
    void apply_left(const MatrixXc& m);  // slice[p] <- m * slice[p]
    void apply_right(const MatrixXc& m); // slice[p] <- slice[p] * m
};

class MPS {
  public:
    MPS() = default;
    MPS(std::vector<SiteTensor> tensors, int center);

    int length() const { return static_cast<int>(site_.size()); }
    int center() const { return center_; }
    const SiteTensor& tensor(int i) const { return site_[i]; }
    SiteTensor& tensor(int i) { return site_[i]; }
    int bond_dim(int bond) const { return site_[bond].chi_right(); }
    int max_bond_dim() const;

    // norm = Frobenius norm of the center tensor (others isometric)
    double norm() const;
    void normalize();

    // gauge moves via QR/LQ; state unchanged
    void move_center_to(int target);

    // max deviation from the left/right isometry conditions away from center
    double canonical_error() const;

    // observables (transfer contractions; no canonical form assumed)
    Complex expect_site(int i, const MatrixXc& op) const;
    Complex expect_two_site(int i, const MatrixXc& pair_op) const; // sites i, i+1
    Complex overlap(const MPS& other) const;                       // <this|other>

    // chain one-body correlator C[k,l] = <c_k^dag c_l> over n_chain sites
    MatrixXc chain_correlation_matrix(const SiteLayout& layout) const;

    // von Neumann entropy of the Schmidt spectrum across bond b (sites b|b+1)
    double entanglement_entropy(int bond) const;
    double max_entanglement_entropy() const;

    // dense state vector (small systems / tests); index fused site-major
    VectorXc dense() const;

    void save(const std::string& path) const;
    static MPS load(const std::string& path);

  private:
    std::vector<SiteTensor> site_;
    int center_ = 0;
};

// |j-bar n> x |0...0>: dressed two-site block split by SVD (rank <= 2), chain
// in vacuum, normalized, center at site 0.
MPS initial_state(const DressedBasis& basis, int j, int n, const SiteLayout& layout);

// product state in the bare basis (tests): occupation per site
MPS product_state(const SiteLayout& layout, const std::vector<int>& occupation);

// Pads bond dimensions up to min(chi, dim growth from either edge) with
// orthonormal directions of zero weight; the represented state is unchanged.
// One-site TDVP then explores the fixed-chi manifold.  Center moves to 0.
MPS embed_bonds(const MPS& psi, int chi);

} // namespace chainqed
