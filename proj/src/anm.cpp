#include "dsk/anm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsk/linalg.hpp"
#include "dsk/signal_model.hpp"

namespace dsk {

namespace {

// Orthogonal projection of a square matrix onto Hermitian Toeplitz matrices:
// average each diagonal, then enforce Hermitian symmetry. Returns the first
// column.
ComplexVector toeplitz_first_column(const ComplexMatrix& A) {
    const Index M = A.rows();
    ComplexVector u(M);
    for (Index d = 0; d < M; ++d) {
        cplx lower = 0.0, upper = 0.0;
        for (Index i = d; i < M; ++i) {
            lower += A(i, i - d);
            upper += A(i - d, i);
        }
        u(d) = 0.5 * (lower + std::conj(upper)) / static_cast<double>(M - d);
    }
    u(0) = u(0).real();
    return u;
}

} // namespace

ToeplitzVector::ToeplitzVector(ComplexVector u) : u_(std::move(u)) {
    if (u_.size() > 0) u_(0) = u_(0).real();
}

ComplexMatrix ToeplitzVector::matrix() const {
    const Index M = u_.size();
    ComplexMatrix T(M, M);
    for (Index j = 0; j < M; ++j) {
        for (Index i = 0; i < M; ++i) T(i, j) = i >= j ? u_(i - j) : std::conj(u_(j - i));
    }
    return T;
}

AnmResult anm_solve(const ComplexMatrix& observed, const SampleMask& mask, const AnmOptions& opts) {
    require_same_shape(observed, mask);
    if (mask.empty()) throw ParameterError("ANM needs at least one observed entry");
    require_finite(observed, "observed matrix");
    const Index M = observed.rows(), N = observed.cols(), P = M + N;
    const ComplexMatrix b = mask.project(observed);

    AnmResult res;
    if (b.norm() == 0.0) {
        res.Xhat = ComplexMatrix::Zero(M, N);
        res.u = ToeplitzVector(ComplexVector::Zero(M));
        res.certificate = {ComplexMatrix::Zero(M, N), mask};
        res.report.converged = true;
        return res;
    }

    double rho = opts.rho0 > 0.0 ? opts.rho0 : 1.0 / spectral_norm(b);
    ComplexMatrix Z = ComplexMatrix::Zero(P, P);
    ComplexMatrix Lam = ComplexMatrix::Zero(P, P);
    ComplexMatrix B = ComplexMatrix::Zero(P, P), Bold(P, P);
    ComplexVector u = ComplexVector::Zero(M);
    SolveReport& rep = res.report;
    double primal = 0.0, change = 0.0, dual = 0.0;
    const auto& idx = mask.indices();

    std::size_t it = 0;
    while (it < opts.max_iter) {
        ++it;
        Bold = B;
        const ComplexMatrix V = Z + Lam / rho;

        ComplexMatrix T11 = V.topLeftCorner(M, M);
        T11.diagonal().array() -= 1.0 / (2.0 * static_cast<double>(M) * rho);
        u = toeplitz_first_column(T11);
        B.topLeftCorner(M, M) = ToeplitzVector(u).matrix();

        ComplexMatrix X = V.topRightCorner(M, N);
        for (const auto& [i, j] : idx) X(i, j) = b(i, j);
        B.topRightCorner(M, N) = X;
        B.bottomLeftCorner(N, M) = X.adjoint();

        ComplexMatrix D = 0.5 * (V.bottomRightCorner(N, N) + V.bottomRightCorner(N, N).adjoint());
        D.diagonal().array() -= 1.0 / (2.0 * rho);
        B.bottomRightCorner(N, N) = D;

        Z = psd_projection(B - Lam / rho);
        const ComplexMatrix R = Z - B;
        Lam += rho * R;

        const double r_abs = R.norm();
        const double dB = (B - Bold).norm();
        const double scale = std::max({Z.norm(), B.norm(), std::numeric_limits<double>::min()});
        primal = r_abs / scale;
        change = dB / scale;
        dual = rho * dB / std::max(Lam.norm(), std::numeric_limits<double>::min());
        if (primal < opts.tol_primal && change < opts.tol_change) {
            rep.converged = true;
            break;
        }
        if (opts.balance_every > 0 && it % opts.balance_every == 0) {
            const double s_abs = rho * dB;
            if (r_abs > opts.balance_ratio * s_abs) {
                rho *= opts.balance_factor;
            } else if (s_abs > opts.balance_ratio * r_abs) {
                rho /= opts.balance_factor;
            }
        }
    }

    // Multiplier of the X-block coupling; Re<Y, b> matches the SDP value at
    // optimality, and sqrt(M) Y has undamped dual polynomial bounded by 1.
    const ComplexMatrix Y = mask.project(-2.0 * Lam.topRightCorner(M, N));
    const double objective =
        u(0).real() / 2.0 + 0.5 * B.bottomRightCorner(N, N).trace().real();

    rep.iterations = it;
    rep.primal_residual = primal;
    rep.dual_residual = dual;
    rep.objective = objective;
    rep.rho = rho;
    rep.duality_gap = objective > 0.0 ? std::abs(real_inner(Y, b) - objective) / objective
                                      : std::abs(real_inner(Y, b));
    const ComplexMatrix Q = std::sqrt(static_cast<double>(M)) * Y;
    rep.q_norm = spectral_norm(Q);
    const HermitianEig te = hermitian_eig_descending(ToeplitzVector(u).matrix());
    Index rank = 0;
    while (rank < M && te.values(rank) > 1e-6 * std::max(te.values(0), 0.0)) ++rank;
    rep.rank = rank;

    double lo = 0.0, hi = 0.0;
    psd_projection(B, &lo, &hi);
    res.psd_margin = hi > 0.0 ? lo / hi : lo;

    res.Xhat = B.topRightCorner(M, N);
    res.u = ToeplitzVector(u);
    res.certificate = {Q, mask};
    return res;
}

RealVector anm_dual_poly(const DualCertificate& Q, std::span<const double> f_grid) {
    const Index M = Q.Q.rows();
    RealVector out(static_cast<Index>(f_grid.size()));
    for (std::size_t j = 0; j < f_grid.size(); ++j) {
        out(static_cast<Index>(j)) = (Q.Q.adjoint() * make_atom(1.0, f_grid[j], M)).norm();
    }
    return out;
}

} // namespace dsk
