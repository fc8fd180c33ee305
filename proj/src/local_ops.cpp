#include "chainqed/local_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace chainqed::ops {

MatrixXc sigma_z() {
    MatrixXc s = MatrixXc::Zero(2, 2);
    s(0, 0) = -1.0;
    s(1, 1) = 1.0;
    return s;
}

MatrixXc sigma_x() {
    MatrixXc s = MatrixXc::Zero(2, 2);
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    return s;
}

MatrixXc sigma_plus() {
    MatrixXc s = MatrixXc::Zero(2, 2);
    s(1, 0) = 1.0;
    return s;
}

MatrixXc sigma_minus() {
    MatrixXc s = MatrixXc::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

namespace {

enum class BosonOp { annihilate, create, number, position, position_sq };

const MatrixXc& cached_boson(BosonOp which, int dim) {
    static std::map<std::pair<int, int>, MatrixXc> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(static_cast<int>(which), dim);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    MatrixXc a = MatrixXc::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    MatrixXc m;
    switch (which) {
        case BosonOp::annihilate: m = a; break;
        case BosonOp::create: m = a.adjoint(); break;
        case BosonOp::number: m = a.adjoint() * a; break;
        case BosonOp::position: m = a + a.adjoint().eval(); break;
        case BosonOp::position_sq: {
            MatrixXc x = a + a.adjoint().eval();
            m = x * x;
            break;
        }
    }
    return cache.emplace(key, std::move(m)).first->second;
}

} // namespace

const MatrixXc& annihilate(int dim) { return cached_boson(BosonOp::annihilate, dim); }
const MatrixXc& create(int dim) { return cached_boson(BosonOp::create, dim); }
const MatrixXc& number(int dim) { return cached_boson(BosonOp::number, dim); }
const MatrixXc& position(int dim) { return cached_boson(BosonOp::position, dim); }
const MatrixXc& position_sq(int dim) { return cached_boson(BosonOp::position_sq, dim); }

MatrixXc identity(int dim) { return MatrixXc::Identity(dim, dim); }

MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
    MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace chainqed::ops
