// local_ops.hpp — single-site operators (qubit Paulis, truncated bosons)

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace chainqed {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

namespace ops {

MatrixXc sigma_z();
MatrixXc sigma_x();
MatrixXc sigma_plus();  // |1><0|
MatrixXc sigma_minus(); // |0><1|

// truncated boson operators, cached per dimension
const MatrixXc& annihilate(int dim);
const MatrixXc& create(int dim);
const MatrixXc& number(int dim);
const MatrixXc& position(int dim);     // a + a^dag
const MatrixXc& position_sq(int dim);  // (a + a^dag)^2
MatrixXc identity(int dim);

// kron with the first factor as the slow index: out[(i1 d2 + i2), ...]
MatrixXc kron(const MatrixXc& a, const MatrixXc& b);

} // namespace ops

} // namespace chainqed
