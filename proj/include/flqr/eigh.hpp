#pragma once

#include <Eigen/Dense>

namespace flqr {

struct EighResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXcd vectors; // columns, same order as values
};

// Hermitian eigendecomposition (LAPACK zheevd/dsyevd). The real-symmetric
// overload is roughly 4x faster and is used whenever the matrix has no
// imaginary part.
EighResult eigh(const Eigen::MatrixXcd& m);
EighResult eigh(const Eigen::MatrixXd& m);

// Eigenvalues only.
Eigen::VectorXd eigvalsh(const Eigen::MatrixXcd& m);

} // namespace flqr
