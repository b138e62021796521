#pragma once

#include <span>

#include "dsk/core.hpp"
#include "dsk/nnm.hpp"

namespace dsk {

/// First column u of a Hermitian Toeplitz matrix Toep(u), Toep(u)(i,j) = u(i-j)
/// for i >= j and conj(u(j-i)) above the diagonal. u(0) is real.
class ToeplitzVector {
public:
    ToeplitzVector() = default;
    /// Symmetrizes by discarding the imaginary part of u(0).
    explicit ToeplitzVector(ComplexVector u);
    [[nodiscard]] const ComplexVector& u() const noexcept { return u_; }
    [[nodiscard]] ComplexMatrix matrix() const;

private:
    ComplexVector u_;
};

/// Options for the ANM operator-splitting solver.
struct AnmOptions {
    std::size_t max_iter = 20000;
    /// Relative residual ||Z - B||_F / max(||Z||_F, ||B||_F) of the PSD copy Z
    /// against the structured block B.
    double tol_primal = 1e-7;
    /// Relative change of the structured block between iterations.
    double tol_change = 1e-7;
    /// <= 0 selects 1 / sigma_1(observed, zero-filled).
    double rho0 = 0.0;
    double gap_tol = 1e-3;
    double balance_ratio = 10.0;
    double balance_factor = 2.0;
    std::size_t balance_every = 10;
};

struct AnmResult {
    ComplexMatrix Xhat;
    ToeplitzVector u;
    /// Certificate scaled so that its undamped dual polynomial peaks at 1.
    DualCertificate certificate;
    SolveReport report;
    /// lambda_min / lambda_max of the returned block [[Toep(u), X], [X^H, D]].
    double psd_margin = 0.0;
};

/// Approximately solves
///   min (1/2M) Tr Toep(u) + (1/2) Tr D
///   s.t. [[Toep(u), X], [X^H, D]] >= 0,  X_Omega = observed_Omega,
/// with PSD projection by eigen-decomposition and Toeplitz averaging. The
/// certificate is built from the multiplier of the X-block coupling.
AnmResult anm_solve(const ComplexMatrix& observed, const SampleMask& mask,
                    const AnmOptions& opts = {});

/// ||Q^H a(1, f)||_2 over `f_grid`.
RealVector anm_dual_poly(const DualCertificate& Q, std::span<const double> f_grid);

} // namespace dsk
