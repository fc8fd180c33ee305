// linalg.hpp — small dense/tridiagonal eigensolver helpers

#pragma once

#include <Eigen/Dense>

namespace chainqed {

struct TridiagEig {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // column k is the eigenvector of values[k]
};

// Eigendecomposition of a symmetric tridiagonal matrix given by its diagonal
// (size n) and subdiagonal (size n-1).  Uses LAPACK divide and conquer for
// large n, Eigen otherwise.
TridiagEig tridiag_eig(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                       bool want_vectors = true);

} // namespace chainqed
