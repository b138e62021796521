#pragma once

#include "dsk/core.hpp"

namespace dsk {

/// X ~= U * diag(S) * V^H with orthonormal columns in U (M x p) and V (N x p)
/// and S non-increasing.
struct SvdFactors {
    ComplexMatrix U;
    RealVector S;
    ComplexMatrix V;

    [[nodiscard]] Index rank() const noexcept { return S.size(); }
    [[nodiscard]] ComplexMatrix reconstruct() const;
};

/// Thin SVD keeping all min(M,N) triplets (LAPACK divide-and-conquer).
SvdFactors thin_svd(const ComplexMatrix& X);

/// Best rank-k factors. Throws ParameterError unless 1 <= k <= min(M,N).
SvdFactors truncated_svd(const ComplexMatrix& X, Index k);

/// Singular values only, non-increasing.
RealVector singular_values(const ComplexMatrix& X);

/// Full M x M unitary matrix of left singular vectors, ordered by
/// non-increasing singular value (columns beyond min(M,N) span the left null
/// space).
ComplexMatrix full_left_basis(const ComplexMatrix& X);

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted
/// non-increasing.
struct HermitianEig {
    RealVector values;
    ComplexMatrix vectors;
};
HermitianEig hermitian_eig_descending(const ComplexMatrix& H);

/// Nearest positive semidefinite matrix in Frobenius norm to the Hermitian
/// part of H (negative eigenvalues clipped). `min_eig`/`max_eig` receive the
/// extreme eigenvalues of the input when non-null.
ComplexMatrix psd_projection(const ComplexMatrix& H, double* min_eig = nullptr,
                             double* max_eig = nullptr);

double spectral_norm(const ComplexMatrix& X);
double nuclear_norm(const ComplexMatrix& X);

/// Re(tr(B^H A)).
double real_inner(const ComplexMatrix& A, const ComplexMatrix& B);

/// Largest principal-angle sine between the column spans of two orthonormal
/// bases of equal width.
double subspace_distance(const ComplexMatrix& A, const ComplexMatrix& B);

} // namespace dsk
