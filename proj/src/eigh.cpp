#include "flqr/eigh.hpp"

#include <complex>

#include <lapacke.h>

#include "flqr/error.hpp"

namespace flqr {

namespace {

void check_info(lapack_int info, const char* routine) {
    if (info != 0)
        fail(ErrorCode::internal,
             std::string(routine) + " failed with info=" + std::to_string(info));
}

} // namespace

EighResult eigh(const Eigen::MatrixXcd& m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    EighResult r;
    r.values.resize(n);
    r.vectors = m; // zheevd overwrites with eigenvectors
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(r.vectors.data()), n, r.values.data());
    check_info(info, "zheevd");
    return r;
}

EighResult eigh(const Eigen::MatrixXd& m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    Eigen::VectorXd values(n);
    Eigen::MatrixXd vectors = m;
    lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, vectors.data(), n, values.data());
    check_info(info, "dsyevd");
    EighResult r;
    r.values = std::move(values);
    r.vectors = vectors.cast<std::complex<double>>();
    return r;
}

Eigen::VectorXd eigvalsh(const Eigen::MatrixXcd& m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    Eigen::VectorXd values(n);
    Eigen::MatrixXcd work = m;
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'N', 'L', n,
        reinterpret_cast<lapack_complex_double*>(work.data()), n, values.data());
    check_info(info, "zheevd");
    return values;
}

} // namespace flqr
