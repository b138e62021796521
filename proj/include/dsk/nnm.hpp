#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dsk/core.hpp"
#include "dsk/linalg.hpp"

namespace dsk {

/// Dual certificate Q of a nuclear-norm program. Its dual polynomial
/// ||Q^H a(r,f)||_2 attains 1 at recoverable (r,f) pairs.
///
/// When `support` is set, Q vanishes outside it (missing-data case).
struct DualCertificate {
    ComplexMatrix Q;
    std::optional<SampleMask> support;
};

/// Options for the operator-splitting nuclear-norm completion solver.
struct SolverOptions {
    std::size_t max_iter = 50000;
    /// ||X - Z||_F / ||X*_Omega||_F, where Z is the Omega-feasible copy.
    double tol_primal = 1e-9;
    /// ||Z_k - Z_{k-1}||_F / ||Z_k||_F.
    double tol_change = 1e-9;
    /// Initial penalty; <= 0 selects 1 / sigma_1(observed, zero-filled).
    double rho0 = 0.0;
    double gap_tol = 1e-4;
    /// Over-relaxation factor in (0, 2).
    double relaxation = 1.6;
    /// Residual balancing: rescale rho by `balance_factor` whenever one
    /// residual exceeds the other by `balance_ratio`, checked every
    /// `balance_every` iterations.
    double balance_ratio = 10.0;
    double balance_factor = 2.0;
    std::size_t balance_every = 10;
    /// Record (objective, residuals) every `history_stride` iterations; 0 = off.
    std::size_t history_stride = 0;
};

struct SolveHistoryEntry {
    std::size_t iteration = 0;
    double objective = 0.0;
    double primal_residual = 0.0;
    double change = 0.0;
};

/// Convergence diagnostics of an iterative solve.
struct SolveReport {
    std::size_t iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    /// Nuclear norm of the returned estimate.
    double objective = 0.0;
    bool converged = false;
    /// |<Q, X*_Omega>_R - objective| / objective.
    double duality_gap = 0.0;
    /// Spectral norm of Q before any rescaling to the unit ball.
    double q_norm = 0.0;
    /// ||Q - U V^H|| for the SVD factors of the estimate.
    double w_norm = 0.0;
    Index rank = 0;
    double rho = 0.0;
    std::vector<SolveHistoryEntry> history;
};

struct CompletionResult {
    ComplexMatrix Xhat;
    DualCertificate certificate;
    SolveReport report;
};

struct DenoiseResult {
    ComplexMatrix Xhat;
    DualCertificate certificate;
};

/// Q = U V^H from the rank-K SVD of X. Throws RankMismatchError unless the
/// numerical rank (relative threshold 1e-8) equals K.
DualCertificate full_data_dual(const ComplexMatrix& X, Index K);

/// Singular value thresholding, the proximal map of tau ||.||_*.
ComplexMatrix svt(const ComplexMatrix& X, double tau);

/// Minimizes ||X||_* subject to X_Omega = observed_Omega and returns the
/// equality-constraint multiplier as a certificate supported on Omega.
/// `Xhat` agrees with `observed` on Omega exactly.
/// Non-convergence is reported through `report.converged`.
CompletionResult nnm_complete(const ComplexMatrix& observed, const SampleMask& mask,
                              const SolverOptions& opts = {});

/// Closed-form minimizer of 0.5||Y - X||_F^2 + lambda ||X||_* and its
/// certificate Q = (Y - Xhat) / lambda.
DenoiseResult nnm_denoise(const ComplexMatrix& Y, double lambda);

/// Frobenius residuals of U^H (Q - U V^H) and (Q - U V^H) V, where U, V are
/// the rank-`rank` SVD factors of `estimate`.
struct CertificateResidual {
    double left = 0.0;
    double right = 0.0;
    double w_norm = 0.0;
};
CertificateResidual certificate_structure(const ComplexMatrix& Q, const ComplexMatrix& estimate,
                                          Index rank);

/// Leverage-score coherence of the rank-K factors of X.
struct Coherence {
    double mu0 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
};
Coherence coherence_diagnostics(const ComplexMatrix& X, Index K);

/// gamma_M(r) = (r^{2M} - 1) / (2 log r) for r < 1, M for r = 1.
double gamma_m(double r, Index M);

/// L(M,r,f) = min_k (1/r_k) [gamma_M(r_k) - (c2/Delta_f)(1 + r_k^{2M})].
/// May be negative, in which case the sample-complexity bound is vacuous.
double corollary_bound(const SpectralParams& params, Index M, double c2);

/// Sample-complexity quantities for a given signal; c1 and c2 are the
/// unspecified absolute constants, supplied by the caller.
struct SampleComplexity {
    double delta_f = 0.0;
    double L = 0.0;
    double mu2 = 0.0;
    double sigma_min_phi = 0.0;
    /// max{M / L, mu2 / sigma_min(Phi)^2}; +inf when L <= 0.
    double mu1 = 0.0;
    /// c1 mu1 max(M,N) K log^4(MN).
    double omega_bound = 0.0;
};
SampleComplexity sample_complexity(const SpectralParams& params, const ComplexMatrix& phi, Index M,
                                   double c1, double c2);

/// sigma_min^2 of the unnormalized Vandermonde matrix [a^v(r_k,f_k)].
double vandermonde_sigma_min_sq(const SpectralParams& params, Index M);

} // namespace dsk
