#include "subharm/linalg.hpp"

#include "subharm/errors.hpp"

#include <lapacke.h>

#include <string>

namespace subharm {

EigenDecomposition eig(const Eigen::MatrixXcd& a, bool want_vectors) {
    const lapack_int n = lapack_int(a.rows());
    if (a.cols() != a.rows()) throw ArgumentError("eig: matrix must be square");
    EigenDecomposition out;
    out.values.resize(n);
    if (n == 0) return out;
    Eigen::MatrixXcd work = a;  // column-major, overwritten by zgeev
    if (want_vectors) out.vectors.resize(n, n);
    lapack_complex_double dummy;
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
        reinterpret_cast<lapack_complex_double*>(out.values.data()), &dummy, 1,
        want_vectors ? reinterpret_cast<lapack_complex_double*>(out.vectors.data()) : &dummy, want_vectors ? n : 1);
    if (info != 0) throw NumericError("zgeev failed with info = " + std::to_string(info));
    return out;
}

}  // namespace subharm
