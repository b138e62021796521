#include "dsk/nnm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsk/signal_model.hpp"

namespace dsk {

namespace {

// Shrinks singular values by tau; returns the reconstruction and fills the
// retained factors.
struct Shrunk {
    ComplexMatrix X;
    Index rank = 0;
    double nuclear = 0.0;
};

Shrunk shrink(const SvdFactors& f, double tau) {
    Shrunk out;
    while (out.rank < f.S.size() && f.S(out.rank) > tau) ++out.rank;
    const RealVector s = f.S.head(out.rank).array() - tau;
    out.nuclear = s.sum();
    out.X = f.U.leftCols(out.rank) * s.asDiagonal() * f.V.leftCols(out.rank).adjoint();
    return out;
}

} // namespace

DualCertificate full_data_dual(const ComplexMatrix& X, Index K) {
    const Index p = std::min(X.rows(), X.cols());
    if (K < 1 || K > p) throw ParameterError("K must satisfy 1 <= K <= min(M,N)");
    SvdFactors f = thin_svd(X);
    Index numerical_rank = 0;
    while (numerical_rank < p && f.S(numerical_rank) >= 1e-8 * f.S(0) && f.S(0) > 0.0) {
        ++numerical_rank;
    }
    if (numerical_rank != K) {
        throw RankMismatchError("data numerical rank " + std::to_string(numerical_rank) +
                                " differs from K=" + std::to_string(K));
    }
    return {f.U.leftCols(K) * f.V.leftCols(K).adjoint(), std::nullopt};
}

ComplexMatrix svt(const ComplexMatrix& X, double tau) {
    if (!(tau >= 0.0)) throw ParameterError("threshold must be nonnegative");
    if (tau == 0.0) return X;
    return shrink(thin_svd(X), tau).X;
}

CertificateResidual certificate_structure(const ComplexMatrix& Q, const ComplexMatrix& estimate,
                                          Index rank) {
    CertificateResidual out;
    if (rank == 0) {
        out.w_norm = spectral_norm(Q);
        return out;
    }
    const SvdFactors f = truncated_svd(estimate, rank);
    const ComplexMatrix W = Q - f.U * f.V.adjoint();
    out.left = (f.U.adjoint() * W).norm();
    out.right = (W * f.V).norm();
    out.w_norm = spectral_norm(W);
    return out;
}

CompletionResult nnm_complete(const ComplexMatrix& observed, const SampleMask& mask,
                              const SolverOptions& opts) {
    require_same_shape(observed, mask);
    if (mask.empty()) throw ParameterError("completion needs at least one observed entry");
    require_finite(observed, "observed matrix");
    if (!(opts.relaxation > 0.0 && opts.relaxation < 2.0)) {
        throw ParameterError("relaxation must lie in (0,2)");
    }
    const Index M = observed.rows(), N = observed.cols();
    const ComplexMatrix b = mask.project(observed);
    const double bnorm = b.norm();

    CompletionResult res;
    if (bnorm == 0.0) {
        res.Xhat = ComplexMatrix::Zero(M, N);
        res.certificate = {ComplexMatrix::Zero(M, N), mask};
        res.report.converged = true;
        return res;
    }

    const auto& idx = mask.indices();
    auto enforce = [&](ComplexMatrix& Z) {
        for (const auto& [i, j] : idx) Z(i, j) = b(i, j);
    };

    double rho = opts.rho0 > 0.0 ? opts.rho0 : 1.0 / spectral_norm(b);
    const double alpha = opts.relaxation;
    ComplexMatrix Z = b;
    ComplexMatrix U = ComplexMatrix::Zero(M, N);
    ComplexMatrix Zold(M, N), Xh(M, N);
    Shrunk X;
    SolveReport& rep = res.report;
    double primal = 0.0, change = 0.0, dual = 0.0;

    std::size_t it = 0;
    while (it < opts.max_iter) {
        ++it;
        X = shrink(thin_svd(Z - U), 1.0 / rho);
        Zold = Z;
        Xh = alpha * X.X + (1.0 - alpha) * Zold;
        Z = Xh + U;
        enforce(Z);
        U += Xh - Z;

        const double r_abs = (X.X - Z).norm();
        const double dz = (Z - Zold).norm();
        primal = r_abs / bnorm;
        change = dz / std::max(Z.norm(), std::numeric_limits<double>::min());
        dual = rho * dz / bnorm;
        if (opts.history_stride > 0 && it % opts.history_stride == 0) {
            rep.history.push_back({it, X.nuclear, primal, change});
        }
        if (primal < opts.tol_primal && change < opts.tol_change) {
            rep.converged = true;
            break;
        }
        if (opts.balance_every > 0 && it % opts.balance_every == 0) {
            const double s_abs = rho * dz;
            if (r_abs > opts.balance_ratio * s_abs) {
                rho *= opts.balance_factor;
                U /= opts.balance_factor;
            } else if (s_abs > opts.balance_ratio * r_abs) {
                rho /= opts.balance_factor;
                U *= opts.balance_factor;
            }
        }
    }

    // Scaled multiplier of the Omega-equality constraint: -rho U lies in the
    // subdifferential of the nuclear norm at the limit and vanishes off Omega.
    ComplexMatrix Q = mask.project(-rho * U);
    rep.q_norm = spectral_norm(Q);
    if (rep.q_norm > 1.0) Q /= rep.q_norm;

    rep.iterations = it;
    rep.primal_residual = primal;
    rep.dual_residual = dual;
    rep.objective = X.nuclear;
    rep.rank = X.rank;
    rep.rho = rho;
    rep.duality_gap = X.nuclear > 0.0 ? std::abs(real_inner(Q, b) - X.nuclear) / X.nuclear
                                      : std::abs(real_inner(Q, b));
    rep.w_norm = certificate_structure(Q, X.X, X.rank).w_norm;

    // The returned estimate honours the constraint exactly; the report keeps
    // the rank and objective of the low-rank iterate.
    res.Xhat = std::move(X.X);
    enforce(res.Xhat);
    res.certificate = {std::move(Q), mask};
    return res;
}

DenoiseResult nnm_denoise(const ComplexMatrix& Y, double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("regularization weight must be positive");
    DenoiseResult out;
    out.Xhat = svt(Y, lambda);
    out.certificate = {(Y - out.Xhat) / lambda, std::nullopt};
    return out;
}

Coherence coherence_diagnostics(const ComplexMatrix& X, Index K) {
    const SvdFactors f = truncated_svd(X, K);
    const double k = static_cast<double>(K);
    Coherence c;
    c.mu1 = static_cast<double>(X.rows()) / k * f.U.rowwise().squaredNorm().maxCoeff();
    c.mu2 = static_cast<double>(X.cols()) / k * f.V.rowwise().squaredNorm().maxCoeff();
    c.mu0 = std::max(c.mu1, c.mu2);
    return c;
}

double gamma_m(double r, Index M) {
    if (!(r > 0.0 && r <= 1.0)) throw ParameterError("damping ratio must lie in (0,1]");
    if (r == 1.0) return static_cast<double>(M);
    const double lr = std::log(r);
    return std::expm1(2.0 * static_cast<double>(M) * lr) / (2.0 * lr);
}

double corollary_bound(const SpectralParams& params, Index M, double c2) {
    if (!(c2 > 0.0)) throw ParameterError("c2 must be positive");
    if (params.empty()) throw ParameterError("no modes");
    const double df = min_separation(params);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : params) {
        const double r2m = std::pow(m.r, 2.0 * static_cast<double>(M));
        best = std::min(best, (gamma_m(m.r, M) - c2 / df * (1.0 + r2m)) / m.r);
    }
    return best;
}

double vandermonde_sigma_min_sq(const SpectralParams& params, Index M) {
    ComplexMatrix A(M, static_cast<Index>(params.size()));
    for (std::size_t k = 0; k < params.size(); ++k) {
        A.col(static_cast<Index>(k)) = make_unnormalized_atom(params[k].r, params[k].f, M);
    }
    const RealVector s = singular_values(A);
    const double smin = s.size() < A.cols() ? 0.0 : s(s.size() - 1);
    return smin * smin;
}

SampleComplexity sample_complexity(const SpectralParams& params, const ComplexMatrix& phi, Index M,
                                   double c1, double c2) {
    const Index N = phi.rows();
    const auto K = static_cast<double>(params.size());
    if (phi.cols() != static_cast<Index>(params.size())) throw DimensionError("phi width differs from K");
    SampleComplexity s;
    s.delta_f = min_separation(params);
    s.L = corollary_bound(params, M, c2);
    s.mu2 = phi.rowwise().squaredNorm().maxCoeff() * static_cast<double>(N) / K;
    const RealVector sv = singular_values(phi);
    s.sigma_min_phi = sv.size() < phi.cols() ? 0.0 : sv(sv.size() - 1);
    const double inf = std::numeric_limits<double>::infinity();
    const double a = s.L > 0.0 ? static_cast<double>(M) / s.L : inf;
    const double b = s.sigma_min_phi > 0.0 ? s.mu2 / (s.sigma_min_phi * s.sigma_min_phi) : inf;
    s.mu1 = std::max(a, b);
    const double mn = static_cast<double>(M * N);
    s.omega_bound = c1 * s.mu1 * static_cast<double>(std::max(M, N)) * K * std::pow(std::log(mn), 4);
    return s;
}

} // namespace dsk
