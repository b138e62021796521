#include "doctest.h"

#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "dsk/nnm.hpp"
#include "dsk/random.hpp"
#include "dsk/signal_model.hpp"

using namespace dsk;
using doctest::Approx;

namespace {

ComplexMatrix random_matrix(Index m, Index n, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix X(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) X(i, j) = complex_normal(rng);
    return X;
}

struct BaseDraw {
    SpectralParams params;
    ComplexMatrix phi;
    ComplexMatrix X;
};

BaseDraw base_draw(Index M, Index N, std::uint64_t seed) {
    Rng rng(seed);
    auto p = SpectralParams::from_lists({0.92, 0.98, 0.85}, {0.1, 0.4, 0.8}, gaussian_amplitudes(3, rng));
    const ModeMatrix phi = gaussian_modes(N, 3, rng);
    ComplexMatrix X = synth_data_matrix(p, phi, M);
    return {std::move(p), phi.phi(), std::move(X)};
}

// Eigen's Jacobi SVD as an oracle independent of the LAPACK driver.
double jacobi_nuclear(const ComplexMatrix& X) { return Eigen::JacobiSVD<ComplexMatrix>(X).singularValues().sum(); }
double jacobi_spectral(const ComplexMatrix& X) { return Eigen::JacobiSVD<ComplexMatrix>(X).singularValues()(0); }

double real_dot(const ComplexMatrix& A, const ComplexMatrix& B) { return (A.adjoint() * B).trace().real(); }

} // namespace

TEST_CASE("full_data_dual") {
    const ComplexVector u = random_matrix(5, 1, 1).col(0).normalized();
    const ComplexVector v = random_matrix(4, 1, 2).col(0).normalized();
    const DualCertificate q1 = full_data_dual(u * v.adjoint(), 1);
    CHECK((q1.Q - u * v.adjoint()).norm() < 1e-12);
    CHECK(!q1.support);

    const BaseDraw d = base_draw(50, 50, 3);
    const DualCertificate q = full_data_dual(d.X, 3);
    CHECK(real_dot(d.X, q.Q) == Approx(jacobi_nuclear(d.X)).epsilon(1e-8));
    CHECK(jacobi_spectral(q.Q) == Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(full_data_dual(d.X, 2), RankMismatchError);
    CHECK_THROWS_AS(full_data_dual(d.X, 4), RankMismatchError);
    CHECK(jacobi_spectral(full_data_dual(random_matrix(6, 6, 4), 6).Q) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svt: closed forms") {
    const ComplexMatrix X = random_matrix(4, 3, 5);
    CHECK(svt(X, 0.0) == X);
    ComplexMatrix D = ComplexMatrix::Zero(2, 2);
    D(0, 0) = 3;
    D(1, 1) = 1;
    const ComplexMatrix S = svt(D, 2.0);
    CHECK(std::abs(S(0, 0) - cplx(1.0)) < 1e-14);
    CHECK(S.cwiseAbs().sum() == Approx(1.0));
    CHECK_THROWS_AS(svt(D, -1.0), ParameterError);
}

TEST_CASE("svt: prox optimality and nonexpansiveness") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ComplexMatrix X = random_matrix(8, 6, 10 + seed);
        const double tau = 1.5;
        const ComplexMatrix P = svt(X, tau);
        REQUIRE(P.norm() > 0);
        // (X - P)/tau must be a subgradient of ||.||_* at P.
        const ComplexMatrix G = (X - P) / tau;
        CHECK(jacobi_spectral(G) <= 1.0 + 1e-12);
        CHECK(real_dot(G, P) == Approx(jacobi_nuclear(P)).epsilon(1e-10));

        const ComplexMatrix Y = random_matrix(8, 6, 50 + seed);
        CHECK((svt(X, tau) - svt(Y, tau)).norm() <= (X - Y).norm() * (1 + 1e-12));
    }
}

TEST_CASE("nnm_complete: full mask pins the data") {
    const BaseDraw d = base_draw(12, 10, 7);
    const CompletionResult r = nnm_complete(d.X, SampleMask::full(12, 10));
    CHECK((r.Xhat - d.X).norm() == 0.0);
    CHECK(r.report.converged);
    // Any valid certificate: Q = U V^H + W with W orthogonal to both factors.
    const CertificateResidual c = certificate_structure(r.certificate.Q, d.X, 3);
    CHECK(c.left < 1e-8);
    CHECK(c.right < 1e-8);
    CHECK(c.w_norm <= 1.0 + 1e-8);
}

TEST_CASE("nnm_complete: 20% missing at the base configuration") {
    const BaseDraw d = base_draw(50, 50, 11);
    const SampleMask mask = sample_mask(50, 50, 2000, 7);
    const CompletionResult r = nnm_complete(mask.project(d.X), mask);
    CHECK(r.report.converged);
    CHECK((r.Xhat - d.X).norm() / d.X.norm() <= 1e-5);
    CHECK(r.report.duality_gap < 1e-4);
    // Independent gap: <Q, X_Omega> against the Jacobi nuclear norm.
    const double nuc = jacobi_nuclear(r.Xhat);
    CHECK(std::abs(real_dot(r.certificate.Q, mask.project(d.X)) - nuc) / nuc < 1e-4);
    CHECK(jacobi_spectral(r.certificate.Q) <= 1.0 + 1e-6);
    // Support of Q lies in Omega.
    REQUIRE(r.certificate.support);
    CHECK((mask.project(r.certificate.Q) - r.certificate.Q).norm() == 0.0);
    const CertificateResidual c = certificate_structure(r.certificate.Q, r.Xhat, 3);
    CHECK(c.left < 1e-4);
    CHECK(c.right < 1e-4);
    CHECK(c.w_norm < 1.0);
}

// Unit-modulus factors with random phases: a maximally incoherent rank-one
// matrix.
ComplexMatrix flat_rank_one(Index n, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    ComplexVector u(n), v(n);
    for (Index i = 0; i < n; ++i) {
        u(i) = std::polar(1.0, phase(rng));
        v(i) = std::polar(1.0, phase(rng));
    }
    return u * v.transpose();
}

TEST_CASE("nnm_complete: rank-one 5x5 at 60% observed") {
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ComplexMatrix X = flat_rank_one(5, 100 + seed);
        const SampleMask mask = sample_mask(5, 5, 15, 300 + seed);
        const CompletionResult r = nnm_complete(mask.project(X), mask);
        if ((r.Xhat - X).norm() / X.norm() <= 1e-5) ++exact;
    }
    CHECK(exact > 10);

    // Coherent Gaussian factors often are not the minimizer; the solver must
    // still return a feasible point no worse than the truth.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ComplexMatrix X = random_matrix(5, 1, 100 + seed) * random_matrix(1, 5, 200 + seed);
        const SampleMask mask = sample_mask(5, 5, 15, 300 + seed);
        const CompletionResult r = nnm_complete(mask.project(X), mask);
        CHECK((mask.project(r.Xhat) - mask.project(X)).norm() == 0.0);
        CHECK(jacobi_nuclear(r.Xhat) <= jacobi_nuclear(X) * (1 + 1e-8));
    }
}

TEST_CASE("nnm_complete: degenerate inputs") {
    const SampleMask mask = sample_mask(4, 4, 6, 1);
    const CompletionResult z = nnm_complete(ComplexMatrix::Zero(4, 4), mask);
    CHECK(z.Xhat.norm() == 0.0);
    CHECK(z.report.converged);
    CHECK_THROWS(nnm_complete(ComplexMatrix::Zero(4, 4), SampleMask(4, 4, {})));
    CHECK_THROWS_AS(nnm_complete(ComplexMatrix::Zero(3, 4), mask), DimensionError);
}

TEST_CASE("nnm_denoise") {
    const ComplexMatrix Y = random_matrix(6, 5, 21);
    const double s1 = jacobi_spectral(Y);
    const DenoiseResult big = nnm_denoise(Y, s1 * 1.01);
    CHECK(big.Xhat.norm() == 0.0);
    CHECK((big.certificate.Q - Y / (s1 * 1.01)).norm() < 1e-14);
    CHECK(jacobi_spectral(big.certificate.Q) <= 1.0);

    const DenoiseResult r = nnm_denoise(Y, 0.7);
    CHECK((Y - r.Xhat - 0.7 * r.certificate.Q).norm() < 1e-12);
    CHECK(jacobi_spectral(r.certificate.Q) <= 1.0 + 1e-12);
    CHECK_THROWS_AS(nnm_denoise(Y, 0.0), ParameterError);

    // First-order optimality: no small step along a random direction lowers
    // 0.5||Y - X||^2 + lambda ||X||_*, with Jacobi SVD for the nuclear norm.
    const double lambda = 0.7;
    auto objective = [&](const ComplexMatrix& X) {
        return 0.5 * (Y - X).squaredNorm() + lambda * jacobi_nuclear(X);
    };
    const double base = objective(r.Xhat);
    int worse = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        ComplexMatrix D = random_matrix(6, 5, 1000 + k);
        D /= D.norm();
        if (objective(r.Xhat + 1e-4 * D) < base - 1e-12) ++worse;
    }
    CHECK(worse == 0);
}

TEST_CASE("coherence") {
    ComplexMatrix E = ComplexMatrix::Zero(10, 8);
    E(0, 0) = 3;
    E(1, 1) = 1;
    const Coherence c = coherence_diagnostics(E, 2);
    CHECK(c.mu1 == Approx(5.0));
    CHECK(c.mu2 == Approx(4.0));
    CHECK(c.mu0 == Approx(5.0));

    // DFT columns on both sides: flat leverage.
    const auto p = SpectralParams::from_lists({1.0, 1.0}, {0.0, 0.1}, {cplx(1), cplx(1)});
    const ComplexMatrix X = synth_data_matrix(p, fourier_modes(10, 2), 20);
    const Coherence f = coherence_diagnostics(X, 2);
    CHECK(f.mu1 == Approx(1.0).epsilon(1e-10));
    CHECK(f.mu2 == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("coherence: separation and mode-shape trends") {
    double prev = 1e9;
    for (double k : {0.5, 1.5, 2.5, 3.5, 4.5, 5.5}) {
        const auto p = SpectralParams::from_lists({1.0, 1.0}, {0.1, 0.1 + k / 50.0}, {cplx(1), cplx(1)});
        const double mu = coherence_diagnostics(synth_data_matrix(p, fourier_modes(30, 2), 50), 2).mu0;
        CHECK(mu < prev);
        prev = mu;
    }
    prev = 0.0;
    const auto p = SpectralParams::from_lists({1.0, 1.0}, {0.1, 0.12}, {cplx(1), cplx(1)});
    for (double phi11 = 1.0; phi11 <= 10.0; phi11 += 1.0) {
        const Coherence c = coherence_diagnostics(synth_data_matrix(p, fourier_modes(10, 2, phi11), 50), 2);
        if (phi11 == 1.0) CHECK(c.mu2 == Approx(1.0).epsilon(1e-10));
        CHECK(c.mu0 > prev);
        prev = c.mu0;
    }
}

TEST_CASE("corollary bound") {
    const double c2 = 0.1;
    const auto flat = SpectralParams::from_lists({1.0, 1.0, 1.0}, {0.1, 0.4, 0.8});
    CHECK(corollary_bound(flat, 50, c2) == Approx(50.0 - 2.0 * c2 / 0.3));
    CHECK(corollary_bound(SpectralParams::from_lists({1.0}, {0.3}), 20, c2) == Approx(20.0 - 2.0 * c2));
    // gamma_M(r) = sum-free integral of r^{2t} over [0, M].
    const double r = 0.95;
    CHECK(gamma_m(r, 30) == Approx((std::pow(r, 60) - 1.0) / (2.0 * std::log(r))).epsilon(1e-13));
    CHECK(gamma_m(1.0 - 1e-12, 30) == Approx(30.0).epsilon(1e-9));
    CHECK_THROWS(corollary_bound(flat, 50, 0.0));

    // Diagnostic: the Vandermonde sigma_min^2 dominates L for a small c2.
    Rng rng(31);
    std::uniform_real_distribution<double> ur(0.9, 1.0), uf(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> rs, fs;
        for (int k = 0; k < 3; ++k) {
            rs.push_back(ur(rng));
            fs.push_back(uf(rng));
        }
        const auto p = SpectralParams::from_lists(rs, fs);
        if (min_separation(p) < 0.05) continue;
        CHECK(vandermonde_sigma_min_sq(p, 40) >= corollary_bound(p, 40, 1.0));
    }
}

TEST_CASE("sample complexity") {
    Rng rng(2);
    const auto p = SpectralParams::from_lists({1.0, 1.0}, {0.1, 0.5});
    const ComplexMatrix phi = fourier_modes(10, 2).phi();
    const SampleComplexity s = sample_complexity(p, phi, 40, 1.0, 0.1);
    CHECK(s.delta_f == Approx(0.4));
    CHECK(s.L == Approx(40.0 - 0.2 / 0.4));
    CHECK(s.mu2 == Approx(1.0).epsilon(1e-10));
    CHECK(s.sigma_min_phi == Approx(1.0).epsilon(1e-10));
    CHECK(s.mu1 == Approx(std::max(40.0 / s.L, 1.0)));
    CHECK(s.omega_bound == Approx(s.mu1 * 40.0 * 2.0 * std::pow(std::log(400.0), 4)));
    const SampleComplexity v = sample_complexity(p, phi, 40, 1.0, 100.0);
    CHECK(std::isinf(v.mu1));
}
