#pragma once

#include <Eigen/Dense>

namespace subharm {

struct EigenDecomposition {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  ///< right eigenvectors as columns; empty if not requested
};

/// General complex eigenproblem through LAPACK zgeev. Throws NumericError on failure.
EigenDecomposition eig(const Eigen::MatrixXcd& a, bool want_vectors);

}  // namespace subharm
