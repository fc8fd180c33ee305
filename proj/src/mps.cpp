#include "chainqed/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "chainqed/common.hpp"

namespace chainqed {

int SiteLayout::dim(int site) const {
    if (site == 0) return 2;
    if (site == 1) return d_a;
    if (site >= 2 && site < length()) return d_chain;
    throw NumericalError("site index out of range");
}

MatrixXc SiteTensor::left_matrix() const {
    const int cl = chi_left(), cr = chi_right(), d = dim();
    MatrixXc m(static_cast<Eigen::Index>(d) * cl, cr);
    for (int p = 0; p < d; ++p) m.middleRows(p * cl, cl) = slice[p];
    return m;
}

MatrixXc SiteTensor::right_matrix() const {
    const int cl = chi_left(), cr = chi_right(), d = dim();
    MatrixXc m(cl, static_cast<Eigen::Index>(d) * cr);
    for (int p = 0; p < d; ++p) m.middleCols(p * cr, cr) = slice[p];
    return m;
}

SiteTensor SiteTensor::from_left_matrix(const MatrixXc& m, int chi_l, int d) {
    SiteTensor t;
    t.slice.reserve(d);
    for (int p = 0; p < d; ++p) t.slice.push_back(m.middleRows(p * chi_l, chi_l));
    return t;
}

SiteTensor SiteTensor::from_right_matrix(const MatrixXc& m, int d, int chi_r) {
    SiteTensor t;
    t.slice.reserve(d);
    for (int p = 0; p < d; ++p) t.slice.push_back(m.middleCols(p * chi_r, chi_r));
    return t;
}

void SiteTensor::scale(Complex factor) {
    for (auto& s : slice) s *= factor;
}

void SiteTensor::apply_left(const MatrixXc& m) {
    for (auto& s : slice) s = m * s;
}

void SiteTensor::apply_right(const MatrixXc& m) {
    for (auto& s : slice) s = s * m;
}

MPS::MPS(std::vector<SiteTensor> tensors, int center)
    : site_(std::move(tensors)), center_(center) {
    if (center_ < 0 || center_ >= length()) throw NumericalError("invalid center");
}

int MPS::max_bond_dim() const {
    int best = 1;
    for (int b = 0; b + 1 < length(); ++b) best = std::max(best, bond_dim(b));
    return best;
}

double MPS::norm() const {
    double n2 = 0.0;
    for (const auto& s : site_[center_].slice) n2 += s.squaredNorm();
    return std::sqrt(n2);
}

void MPS::normalize() {
    const double n = norm();
    if (n > 0.0) site_[center_].scale(1.0 / n);
}

void MPS::move_center_to(int target) {
    if (target < 0 || target >= length()) throw NumericalError("invalid center target");
    while (center_ < target) {
        SiteTensor& a = site_[center_];
        const int cl = a.chi_left(), d = a.dim(), cr = a.chi_right();
        const int k = std::min<int>(d * cl, cr); // trims oversized bonds
        Eigen::HouseholderQR<MatrixXc> qr(a.left_matrix());
        MatrixXc thin = MatrixXc::Identity(static_cast<Eigen::Index>(d) * cl, k);
        MatrixXc q = qr.householderQ() * thin;
        MatrixXc r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        a = SiteTensor::from_left_matrix(q, cl, d);
        site_[center_ + 1].apply_left(r);
        ++center_;
    }
    while (center_ > target) {
        SiteTensor& a = site_[center_];
        const int cl = a.chi_left(), d = a.dim(), cr = a.chi_right();
        const int k = std::min<int>(d * cr, cl);
        // LQ via QR of the adjoint: M = L Q with Q row-orthonormal
        Eigen::HouseholderQR<MatrixXc> qr(a.right_matrix().adjoint());
        MatrixXc thin = MatrixXc::Identity(static_cast<Eigen::Index>(d) * cr, k);
        MatrixXc q = (qr.householderQ() * thin).adjoint();
        MatrixXc l = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        a = SiteTensor::from_right_matrix(q, d, cr);
        site_[center_ - 1].apply_right(l.adjoint());
        --center_;
    }
}

double MPS::canonical_error() const {
    double worst = 0.0;
    for (int i = 0; i < length(); ++i) {
        if (i == center_) continue;
        const SiteTensor& a = site_[i];
        if (i < center_) {
            MatrixXc m = a.left_matrix();
            worst = std::max(worst, (m.adjoint() * m -
                                     MatrixXc::Identity(a.chi_right(), a.chi_right()))
                                        .cwiseAbs()
                                        .maxCoeff());
        } else {
            MatrixXc m = a.right_matrix();
            worst = std::max(worst, (m * m.adjoint() -
                                     MatrixXc::Identity(a.chi_left(), a.chi_left()))
                                        .cwiseAbs()
                                        .maxCoeff());
        }
    }
    return worst;
}

namespace {

// left transfer: L' = sum_{pb,p} o(pb,p) A[pb]^H L A[p]
MatrixXc transfer_left(const MatrixXc& L, const SiteTensor& a, const MatrixXc* op) {
    const int cr = a.chi_right();
    MatrixXc out = MatrixXc::Zero(cr, cr);
    if (op == nullptr) {
        for (int p = 0; p < a.dim(); ++p)
            out.noalias() += a.slice[p].adjoint() * L * a.slice[p];
    } else {
        for (int pb = 0; pb < a.dim(); ++pb)
            for (int p = 0; p < a.dim(); ++p) {
                const Complex c = (*op)(pb, p);
                if (c == Complex(0.0)) continue;
                out.noalias() += c * (a.slice[pb].adjoint() * L * a.slice[p]);
            }
    }
    return out;
}

// right transfer: R' = sum_{pb,p} o(pb,p) A[p] R A[pb]^H   (R indexed ket,bra)
MatrixXc transfer_right(const MatrixXc& R, const SiteTensor& a, const MatrixXc* op) {
    const int cl = a.chi_left();
    MatrixXc out = MatrixXc::Zero(cl, cl);
    if (op == nullptr) {
        for (int p = 0; p < a.dim(); ++p)
            out.noalias() += a.slice[p] * R * a.slice[p].adjoint();
    } else {
        for (int pb = 0; pb < a.dim(); ++pb)
            for (int p = 0; p < a.dim(); ++p) {
                const Complex c = (*op)(pb, p);
                if (c == Complex(0.0)) continue;
                out.noalias() += c * (a.slice[p] * R * a.slice[pb].adjoint());
            }
    }
    return out;
}

} // namespace

Complex MPS::expect_site(int i, const MatrixXc& op) const {
    if (i < 0 || i >= length()) throw NumericalError("site out of range");
    MatrixXc L = MatrixXc::Ones(1, 1);
    for (int k = 0; k < length(); ++k)
        L = transfer_left(L, site_[k], k == i ? &op : nullptr);
    return L(0, 0);
}

Complex MPS::expect_two_site(int i, const MatrixXc& pair_op) const {
    if (i < 0 || i + 1 >= length()) throw NumericalError("site out of range");
    const int d0 = site_[i].dim(), d1 = site_[i + 1].dim();
    if (pair_op.rows() != d0 * d1)
        throw NumericalError("two-site operator dimension mismatch");

    MatrixXc L = MatrixXc::Ones(1, 1);
    for (int k = 0; k < i; ++k) L = transfer_left(L, site_[k], nullptr);

    // contract the pair with the two-site operator, fused index p0*d1 + p1
    const SiteTensor& a = site_[i];
    const SiteTensor& b = site_[i + 1];
    MatrixXc out = MatrixXc::Zero(b.chi_right(), b.chi_right());
    std::vector<MatrixXc> lefts(d0);
    for (int p = 0; p < d0; ++p) lefts[p] = L * a.slice[p];
    for (int pb0 = 0; pb0 < d0; ++pb0)
        for (int pb1 = 0; pb1 < d1; ++pb1)
            for (int p0 = 0; p0 < d0; ++p0)
                for (int p1 = 0; p1 < d1; ++p1) {
                    const Complex c = pair_op(pb0 * d1 + pb1, p0 * d1 + p1);
                    if (c == Complex(0.0)) continue;
                    out.noalias() += c * (b.slice[pb1].adjoint() *
                                          (a.slice[pb0].adjoint() * lefts[p0]) *
                                          b.slice[p1]);
                }
    MatrixXc L2 = out;
    for (int k = i + 2; k < length(); ++k) L2 = transfer_left(L2, site_[k], nullptr);
    return L2(0, 0);
}

Complex MPS::overlap(const MPS& other) const {
    if (other.length() != length()) throw NumericalError("overlap: length mismatch");
    MatrixXc L = MatrixXc::Ones(1, 1);
    for (int k = 0; k < length(); ++k) {
        const SiteTensor& bra = site_[k];
        const SiteTensor& ket = other.site_[k];
        MatrixXc out = MatrixXc::Zero(bra.chi_right(), ket.chi_right());
        for (int p = 0; p < bra.dim(); ++p)
            out.noalias() += bra.slice[p].adjoint() * L * ket.slice[p];
        L = std::move(out);
    }
    return L(0, 0);
}

MatrixXc MPS::chain_correlation_matrix(const SiteLayout& layout) const {
    const int N = layout.n_chain;
    const int d = layout.d_chain;
    const MatrixXc c = ops::annihilate(d);
    const MatrixXc cdag = ops::create(d);
    const MatrixXc num = ops::number(d);

    // identity environments
    std::vector<MatrixXc> right(length() + 1);
    right[length()] = MatrixXc::Ones(1, 1);
    for (int k = length() - 1; k >= 0; --k)
        right[k] = transfer_right(right[k + 1], site_[k], nullptr);

    MatrixXc L = MatrixXc::Ones(1, 1);
    for (int k = 0; k < 2; ++k) L = transfer_left(L, site_[k], nullptr);

    MatrixXc C = MatrixXc::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        const int si = layout.chain_site(i);
        {
            MatrixXc Ld = transfer_left(L, site_[si], &num);
            C(i, i) = (Ld * right[si + 1].transpose()).trace();
        }
        MatrixXc Lc = transfer_left(L, site_[si], &cdag);
        for (int j = i + 1; j < N; ++j) {
            const int sj = layout.chain_site(j);
            MatrixXc closed = transfer_left(Lc, site_[sj], &c);
            C(i, j) = (closed * right[sj + 1].transpose()).trace();
            C(j, i) = std::conj(C(i, j));
            if (j + 1 < N) Lc = transfer_left(Lc, site_[sj], nullptr);
        }
        L = transfer_left(L, site_[si], nullptr);
    }
    return C;
}

double MPS::entanglement_entropy(int bond) const {
    if (bond < 0 || bond + 1 >= length()) throw NumericalError("bond out of range");
    MPS copy = *this;
    copy.move_center_to(bond);
    Eigen::JacobiSVD<MatrixXc> svd(copy.site_[bond].left_matrix());
    Eigen::VectorXd s = svd.singularValues();
    const double total = s.squaredNorm();
    if (total <= 0.0) return 0.0;
    double entropy = 0.0;
    for (int k = 0; k < s.size(); ++k) {
        const double p = s[k] * s[k] / total;
        if (p > 1e-300) entropy -= p * std::log(p);
    }
    return entropy;
}

double MPS::max_entanglement_entropy() const {
    // one sweep: move the center across and read the Schmidt spectrum at each
    // bond from the local SVD
    MPS copy = *this;
    copy.move_center_to(0);
    double best = 0.0;
    for (int b = 0; b + 1 < length(); ++b) {
        copy.move_center_to(b);
        Eigen::JacobiSVD<MatrixXc> svd(copy.site_[b].left_matrix());
        Eigen::VectorXd s = svd.singularValues();
        const double total = s.squaredNorm();
        if (total <= 0.0) continue;
        double entropy = 0.0;
        for (int k = 0; k < s.size(); ++k) {
            const double p = s[k] * s[k] / total;
            if (p > 1e-300) entropy -= p * std::log(p);
        }
        best = std::max(best, entropy);
    }
    return best;
}

VectorXc MPS::dense() const {
    std::int64_t dim = 1;
    for (int i = 0; i < length(); ++i) dim *= site_[i].dim();
    if (dim > (1 << 22)) throw NumericalError("dense(): state too large");

    // row-vector chain of bond matrices, fused site-major
    MatrixXc acc = MatrixXc::Ones(1, 1); // (fused, chi)
    for (int i = 0; i < length(); ++i) {
        const SiteTensor& a = site_[i];
        MatrixXc next(acc.rows() * a.dim(), a.chi_right());
        for (Eigen::Index f = 0; f < acc.rows(); ++f)
            for (int p = 0; p < a.dim(); ++p)
                next.row(f * a.dim() + p) = acc.row(f) * a.slice[p];
        acc = std::move(next);
    }
    return acc.col(0);
}

MPS initial_state(const DressedBasis& basis, int j, int n, const SiteLayout& layout) {
    if (layout.d_a != basis.d_a) throw ConfigError("layout d_a does not match basis");
    const VectorXc psi = basis.state_of(j, n); // throws if unlabeled

    // reshape |j n> amplitudes to 2 x d_a and split by SVD (rank <= 2)
    MatrixXc block(2, layout.d_a);
    for (int s = 0; s < 2; ++s)
        for (int m = 0; m < layout.d_a; ++m) block(s, m) = psi[s * layout.d_a + m];
    Eigen::JacobiSVD<MatrixXc> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
    int rank = 0;
    for (int k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()[k] > 1e-14 * svd.singularValues()[0]) ++rank;
    rank = std::max(rank, 1);

    std::vector<SiteTensor> tensors(layout.length());
    SiteTensor& qubit = tensors[0];
    qubit.slice.resize(2);
    for (int s = 0; s < 2; ++s) {
        qubit.slice[s] = MatrixXc::Zero(1, rank);
        for (int k = 0; k < rank; ++k)
            qubit.slice[s](0, k) = svd.matrixU()(s, k) * svd.singularValues()[k];
    }
    SiteTensor& resonator = tensors[1];
    resonator.slice.resize(layout.d_a);
    for (int m = 0; m < layout.d_a; ++m) {
        resonator.slice[m] = MatrixXc::Zero(rank, 1);
        for (int k = 0; k < rank; ++k)
            resonator.slice[m](k, 0) = std::conj(svd.matrixV()(m, k));
    }
    for (int k = 0; k < layout.n_chain; ++k) {
        SiteTensor& t = tensors[layout.chain_site(k)];
        t.slice.assign(layout.d_chain, MatrixXc::Zero(1, 1));
        t.slice[0](0, 0) = 1.0;
    }

    MPS mps(std::move(tensors), 0);
    mps.normalize();
    return mps;
}

MPS product_state(const SiteLayout& layout, const std::vector<int>& occupation) {
    if (static_cast<int>(occupation.size()) != layout.length())
        throw ConfigError("occupation list must cover all sites");
    std::vector<SiteTensor> tensors(layout.length());
    for (int i = 0; i < layout.length(); ++i) {
        const int d = layout.dim(i);
        if (occupation[i] < 0 || occupation[i] >= d)
            throw ConfigError("occupation exceeds local dimension");
        tensors[i].slice.assign(d, MatrixXc::Zero(1, 1));
        tensors[i].slice[occupation[i]](0, 0) = 1.0;
    }
    return MPS(std::move(tensors), 0);
}

MPS embed_bonds(const MPS& psi, int chi) {
    const int L = psi.length();
    // target bond dims capped by the dimension growth from either edge
    std::vector<std::int64_t> left(L + 1, 1), right(L + 1, 1);
    for (int i = 0; i < L; ++i)
        left[i + 1] = std::min<std::int64_t>(left[i] * psi.tensor(i).dim(), 1 << 30);
    for (int i = L - 1; i >= 0; --i)
        right[i] = std::min<std::int64_t>(right[i + 1] * psi.tensor(i).dim(), 1 << 30);

    std::vector<int> target(L - 1);
    for (int b = 0; b + 1 < L; ++b)
        target[b] = static_cast<int>(std::min<std::int64_t>(
            {static_cast<std::int64_t>(chi), left[b + 1], right[b + 1]}));

    // left-to-right sweep, extending each QR with orthonormal completions;
    // the extra directions carry zero weight so the state is unchanged
    std::vector<SiteTensor> out(L);
    MatrixXc carry = MatrixXc::Ones(1, 1);
    for (int i = 0; i < L; ++i) {
        SiteTensor a = psi.tensor(i);
        a.apply_left(carry);
        const int cl = a.chi_left(), d = a.dim();
        const int want = (i + 1 < L) ? target[i] : 1;
        MatrixXc m = a.left_matrix(); // (d*cl) x cr_cur
        Eigen::HouseholderQR<MatrixXc> qr(m);
        MatrixXc full = qr.householderQ() * MatrixXc::Identity(m.rows(), want);
        out[i] = SiteTensor::from_left_matrix(full, cl, d);
        MatrixXc r = MatrixXc::Zero(want, m.cols());
        const int k = std::min<int>(m.rows(), m.cols());
        r.topRows(std::min<int>(want, k)) =
            qr.matrixQR().topRows(std::min<int>(want, k)).triangularView<Eigen::Upper>();
        carry = std::move(r);
    }
    out[L - 1].apply_right(carry); // 1x1 phase/norm factor

    MPS padded(std::move(out), L - 1);
    padded.move_center_to(0);
    return padded;
}

// ---- checkpoint format ----------------------------------------------------
// magic "CQMPS001", int64: length, center, then per site int64 {chi_l, d,
// chi_r} followed by the slice data as little-endian complex<double> pairs in
// column-major order, physical index outermost.

void MPS::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot open checkpoint for writing: " + path);
    out.write("CQMPS001", 8);
    auto put = [&out](std::int64_t v) {
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    };
    put(length());
    put(center_);
    for (const SiteTensor& t : site_) {
        put(t.chi_left());
        put(t.dim());
        put(t.chi_right());
        for (const MatrixXc& s : t.slice)
            out.write(reinterpret_cast<const char*>(s.data()),
                      static_cast<std::streamsize>(sizeof(Complex) * s.size()));
    }
    if (!out) throw NumericalError("checkpoint write failed: " + path);
}

MPS MPS::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NumericalError("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, "CQMPS001", 8) != 0)
        throw NumericalError("not a chainqed checkpoint: " + path);
    auto get = [&in]() {
        std::int64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        return v;
    };
    const std::int64_t L = get();
    const std::int64_t center = get();
    std::vector<SiteTensor> tensors(L);
    for (auto& t : tensors) {
        const std::int64_t cl = get(), d = get(), cr = get();
        t.slice.assign(d, MatrixXc(cl, cr));
        for (auto& s : t.slice)
            in.read(reinterpret_cast<char*>(s.data()),
                    static_cast<std::streamsize>(sizeof(Complex) * s.size()));
    }
    if (!in) throw NumericalError("checkpoint truncated: " + path);
    return MPS(std::move(tensors), static_cast<int>(center));
}

} // namespace chainqed
