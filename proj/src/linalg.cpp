#include "dsk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <lapacke.h>

namespace dsk {

namespace {

lapack_complex_double* as_lapack(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

SvdFactors run_gesdd(const ComplexMatrix& X, char job) {
    const Index m = X.rows(), n = X.cols();
    if (m == 0 || n == 0) throw DimensionError("SVD of an empty matrix");
    const Index p = std::min(m, n);
    ComplexMatrix A = X;
    SvdFactors out;
    out.S.resize(p);
    const Index ucols = job == 'A' ? m : p;
    const Index vrows = job == 'A' ? n : p;
    out.U.resize(m, ucols);
    ComplexMatrix VH(vrows, n);
    const lapack_int info = LAPACKE_zgesdd(
        LAPACK_COL_MAJOR, job, static_cast<lapack_int>(m), static_cast<lapack_int>(n),
        as_lapack(A.data()), static_cast<lapack_int>(m), out.S.data(), as_lapack(out.U.data()),
        static_cast<lapack_int>(m), as_lapack(VH.data()), static_cast<lapack_int>(vrows));
    if (info != 0) throw Error("zgesdd failed with info=" + std::to_string(info));
    out.V = VH.adjoint();
    return out;
}

} // namespace

ComplexMatrix SvdFactors::reconstruct() const { return U * S.asDiagonal() * V.adjoint(); }

SvdFactors thin_svd(const ComplexMatrix& X) { return run_gesdd(X, 'S'); }

SvdFactors truncated_svd(const ComplexMatrix& X, Index k) {
    if (k < 1 || k > std::min(X.rows(), X.cols())) {
        throw ParameterError("truncation rank must satisfy 1 <= k <= min(M,N)");
    }
    SvdFactors f = thin_svd(X);
    f.U.conservativeResize(Eigen::NoChange, k);
    f.V.conservativeResize(Eigen::NoChange, k);
    f.S.conservativeResize(k);
    return f;
}

RealVector singular_values(const ComplexMatrix& X) {
    const Index m = X.rows(), n = X.cols();
    if (m == 0 || n == 0) throw DimensionError("SVD of an empty matrix");
    ComplexMatrix A = X;
    RealVector S(std::min(m, n));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(m),
                                           static_cast<lapack_int>(n), as_lapack(A.data()),
                                           static_cast<lapack_int>(m), S.data(), nullptr, 1,
                                           nullptr, 1);
    if (info != 0) throw Error("zgesdd failed with info=" + std::to_string(info));
    return S;
}

ComplexMatrix full_left_basis(const ComplexMatrix& X) { return run_gesdd(X, 'A').U; }

HermitianEig hermitian_eig_descending(const ComplexMatrix& H) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
    if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
    HermitianEig out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    return out;
}

ComplexMatrix psd_projection(const ComplexMatrix& H, double* min_eig, double* max_eig) {
    const Index n = H.rows();
    if (n != H.cols()) throw DimensionError("PSD projection needs a square matrix");
    ComplexMatrix V = (H + H.adjoint()) * 0.5;
    RealVector w(n);
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                           as_lapack(V.data()), static_cast<lapack_int>(n), w.data());
    if (info != 0) throw Error("zheevd failed with info=" + std::to_string(info));
    if (min_eig) *min_eig = w(0);
    if (max_eig) *max_eig = w(n - 1);
    Index first = 0;
    while (first < n && w(first) <= 0.0) ++first;
    const Index k = n - first;
    if (k == 0) return ComplexMatrix::Zero(n, n);
    const ComplexMatrix Vk = V.rightCols(k);
    return Vk * w.tail(k).asDiagonal() * Vk.adjoint();
}

double spectral_norm(const ComplexMatrix& X) {
    if (X.size() == 0) return 0.0;
    return singular_values(X)(0);
}

double nuclear_norm(const ComplexMatrix& X) {
    if (X.size() == 0) return 0.0;
    return singular_values(X).sum();
}

double real_inner(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("inner product shape mismatch");
    return (B.conjugate().cwiseProduct(A)).sum().real();
}

double subspace_distance(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("subspace shape mismatch");
    // sin of the largest principal angle = || (I - A A^H) B ||_2
    const ComplexMatrix R = B - A * (A.adjoint() * B);
    return spectral_norm(R);
}

} // namespace dsk
