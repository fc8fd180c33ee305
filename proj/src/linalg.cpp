#include "chainqed/linalg.hpp"

#include <lapacke.h>

#include <stdexcept>

#include "chainqed/common.hpp"

namespace chainqed {

TridiagEig tridiag_eig(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                       bool want_vectors) {
    const int n = static_cast<int>(diag.size());
    if (sub.size() != n - 1 && n > 0 && !(n == 1 && sub.size() == 0))
        throw NumericalError("tridiag_eig: subdiagonal size mismatch");

    TridiagEig out;
    out.values = diag;
    Eigen::VectorXd off = sub;
    if (want_vectors) {
        out.vectors = Eigen::MatrixXd::Identity(n, n);
        const int info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, out.values.data(),
                                        off.data(), out.vectors.data(), n);
        if (info != 0) throw NumericalError("dstevd failed, info = " + std::to_string(info));
    } else {
        const int info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'N', n, out.values.data(),
                                        off.data(), nullptr, n);
        if (info != 0) throw NumericalError("dstevd failed, info = " + std::to_string(info));
    }
    return out;
}

} // namespace chainqed
