#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "dsk/atom_energy.hpp"
#include "dsk/linalg.hpp"
#include "dsk/random.hpp"
#include "dsk/signal_model.hpp"
#include "dsk/subspace.hpp"

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

ComplexMatrix random_unitary(Index m, std::uint64_t seed) {
    return Eigen::HouseholderQR<ComplexMatrix>(random_matrix(m, m, seed)).householderQ();
}

ComplexMatrix base_data(Index M, Index N, std::uint64_t seed) {
    Rng rng(seed);
    const auto p = SpectralParams::from_lists({0.92, 0.98, 0.85}, {0.1, 0.4, 0.8}, gaussian_amplitudes(3, rng));
    return synth_data_matrix(p, gaussian_modes(N, 3, rng), M);
}

std::vector<double> uniform_f(Index n) {
    std::vector<double> f(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) f[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(n);
    return f;
}

} // namespace

TEST_CASE("svd: identity and rank one") {
    const SvdFactors id = truncated_svd(ComplexMatrix::Identity(3, 3), 3);
    CHECK((id.S - RealVector::Ones(3)).norm() < 1e-14);

    const ComplexVector u = random_matrix(5, 1, 1).col(0).normalized();
    const ComplexVector v = random_matrix(4, 1, 2).col(0).normalized();
    const SvdFactors f = truncated_svd(u * v.adjoint(), 1);
    CHECK(f.S(0) == Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(std::abs(f.U.col(0).dot(u)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(f.V.col(0).dot(v)) - 1.0) < 1e-12);
    CHECK_THROWS_AS(truncated_svd(u * v.adjoint(), 0), ParameterError);
    CHECK_THROWS_AS(truncated_svd(u * v.adjoint(), 5), ParameterError);
}

TEST_CASE("svd: base data reconstructs at rank three") {
    const ComplexMatrix X = base_data(50, 50, 5);
    const SvdFactors f = truncated_svd(X, 3);
    CHECK((X - f.reconstruct()).norm() / X.norm() < 1e-10);
    const RealVector jac = Eigen::JacobiSVD<ComplexMatrix>(X).singularValues();
    CHECK((singular_values(X) - jac).norm() < 1e-10 * jac(0));
    CHECK(nuclear_norm(X) == Approx(jac.sum()).epsilon(1e-12));
    CHECK(spectral_norm(X) == Approx(jac(0)).epsilon(1e-12));
}

TEST_CASE("svd: full left basis is unitary") {
    const ComplexMatrix X = random_matrix(6, 3, 9);
    const ComplexMatrix U = full_left_basis(X);
    CHECK((U.adjoint() * U - ComplexMatrix::Identity(6, 6)).norm() < 1e-12);
    // Columns past the rank are orthogonal to the range.
    CHECK((U.rightCols(3).adjoint() * X).norm() < 1e-12 * X.norm());
}

TEST_CASE("hermitian eigen and psd projection") {
    const ComplexMatrix A = random_matrix(5, 5, 4);
    const ComplexMatrix H = A + A.adjoint();
    const HermitianEig e = hermitian_eig_descending(H);
    for (Index i = 1; i < 5; ++i) CHECK(e.values(i - 1) >= e.values(i));
    CHECK((e.vectors * e.values.asDiagonal() * e.vectors.adjoint() - H).norm() < 1e-12 * H.norm());

    double lo = 0, hi = 0;
    const ComplexMatrix P = psd_projection(H, &lo, &hi);
    const RealVector ref = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(H).eigenvalues();
    CHECK(lo == Approx(ref(0)).epsilon(1e-12));
    CHECK(hi == Approx(ref(4)).epsilon(1e-12));
    const RealVector pe = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(P).eigenvalues();
    CHECK(pe.minCoeff() > -1e-12);
    // Frobenius distance equals the norm of the clipped negative eigenvalues.
    double neg = 0.0;
    for (Index i = 0; i < 5; ++i) neg += std::min(ref(i), 0.0) * std::min(ref(i), 0.0);
    CHECK((P - H).norm() == Approx(std::sqrt(neg)).epsilon(1e-10));
}

TEST_CASE("autocorrelation equals scaled Hankel gram") {
    ComplexVector y = ComplexVector::Ones(4);
    CHECK((sample_autocorrelation(y, 2) - ComplexMatrix::Ones(2, 2)).norm() < 1e-14);

    Rng rng(8);
    ComplexVector z(40);
    for (Index i = 0; i < 40; ++i) z(i) = complex_normal(rng);
    const ComplexMatrix H = make_hankel(z, 12);
    const ComplexMatrix R = H * H.adjoint() / static_cast<double>(H.cols());
    CHECK((sample_autocorrelation(z, 12) - R).norm() < 1e-12 * R.norm());

    const auto one = SpectralParams::from_lists({1.0}, {0.2}, {cplx(1)});
    const RealVector ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sample_autocorrelation(synth_smv_signal(one, 20), 6)).eigenvalues();
    CHECK(ev(4) < 1e-12 * ev(5));
}

TEST_CASE("music spectrum: single exponential") {
    const auto one = SpectralParams::from_lists({1.0}, {0.3}, {cplx(1)});
    const ComplexVector y = synth_smv_signal(one, 31);
    const SubspacePair sp = autocorrelation_subspaces(sample_autocorrelation(y, 16), 1);
    const auto f = uniform_f(1024);
    const RealVector s = music_spectrum(sp.noise, f);
    Index arg = 0;
    s.maxCoeff(&arg);
    CHECK(std::abs(f[static_cast<std::size_t>(arg)] - 0.3) <= 1.0 / 1024);
    // The true frequency is orthogonal to the noise basis: value is capped.
    const std::vector<double> at{0.3};
    const RealVector peak = music_spectrum(sp.noise, at);
    CHECK(peak(0) >= 1e10);
    CHECK(peak(0) <= kReciprocalCap);

    const ComplexMatrix Q = random_unitary(16, 3);
    const RealVector r = music_spectrum(Q.rightCols(12), f);
    CHECK(r.maxCoeff() < kReciprocalCap);
}

TEST_CASE("dmusic imaging on Hankel data") {
    const auto p = SpectralParams::from_lists({0.92, 0.98, 0.85}, {0.1, 0.4, 0.8}, {cplx(1), cplx(0.5, 1), cplx(-1)});
    const ComplexVector y = synth_smv_signal(p, 99);
    const SubspacePair sp = mmv_music(make_hankel(y, 50), 3);
    const RFGrid grid = RFGrid::uniform(0.8, 1.0, 0.01, 500);
    const RealMatrix J = dmusic_imaging(sp.noise, grid);
    const auto peaks = pick_peaks_2d(J, grid.f_periodic(), 3);
    REQUIRE(peaks.size() == 3);
    std::vector<std::pair<double, double>> found;
    for (const auto& pk : peaks)
        found.emplace_back(grid.r_values()[static_cast<std::size_t>(pk.r_index)], grid.f_values()[static_cast<std::size_t>(pk.f_index)]);
    std::sort(found.begin(), found.end(), [](auto a, auto b) { return a.second < b.second; });
    CHECK(found[0].first == Approx(0.92).epsilon(1e-9));
    CHECK(found[0].second == Approx(0.1).epsilon(1e-9));
    CHECK(found[1].first == Approx(0.98).epsilon(1e-9));
    CHECK(found[1].second == Approx(0.4).epsilon(1e-9));
    CHECK(found[2].first == Approx(0.85).epsilon(1e-9));
    CHECK(found[2].second == Approx(0.8).epsilon(1e-9));
}

TEST_CASE("signal and noise energies sum to one") {
    const ComplexMatrix X = base_data(20, 15, 2);
    const SubspacePair sp = mmv_music(X, 3);
    for (double r : {0.7, 0.9, 1.0}) {
        for (double f : {0.0, 0.13, 0.5, 0.91}) {
            const ComplexVector a = make_atom(r, f, 20);
            const double s = (sp.signal.adjoint() * a).squaredNorm();
            const double n = (sp.noise.adjoint() * a).squaredNorm();
            CHECK(s + n == Approx(1.0).epsilon(1e-12));
        }
    }
    // Noiseless rank-K data: the signal basis spans the column space.
    const ComplexMatrix P = sp.signal * sp.signal.adjoint();
    CHECK((P * X - X).norm() < 1e-10 * X.norm());
    // Generic data with K = M-1 still splits.
    const SubspacePair g = mmv_music(random_matrix(6, 8, 3), 5);
    CHECK(g.signal.cols() == 5);
    CHECK(g.noise.cols() == 1);
    CHECK_THROWS(mmv_music(X, 20));
}

TEST_CASE("mn_music") {
    const ComplexMatrix X = base_data(12, 10, 4);
    const SubspacePair a = mn_music(X, SampleMask::full(12, 10), 3);
    const SubspacePair b = mmv_music(X, 3);
    CHECK(subspace_distance(a.signal, b.signal) < 1e-12);
    CHECK_THROWS(mn_music(X, SampleMask(12, 10, {}), 3));
}

TEST_CASE("esprit") {
    const auto one = SpectralParams::from_lists({1.0}, {0.27}, {cplx(2)});
    const ComplexMatrix H = make_hankel(synth_smv_signal(one, 20), 10);
    const SpectralParams e1 = esprit(H, 1);
    CHECK(e1[0].r == Approx(1.0).epsilon(1e-12));
    CHECK(e1[0].f == Approx(0.27).epsilon(1e-12));

    const ComplexMatrix X = base_data(50, 50, 6);
    const SpectralParams e = esprit(X, 3);
    const std::vector<double> r{0.92, 0.98, 0.85}, f{0.1, 0.4, 0.8};
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(e[k].r - r[k]) < 1e-8);
        CHECK(std::abs(e[k].f - f[k]) < 1e-8);
    }
    CHECK_THROWS_AS(esprit(X, 4), EstimationError);
}

TEST_CASE("atom energy on grid matches direct evaluation") {
    const ComplexMatrix B = random_matrix(9, 4, 12);
    const RFGrid grid = RFGrid::uniform(0.8, 1.0, 0.05, 17);
    const RealMatrix E = atom_energy_on_grid(B, grid);
    for (std::size_t i = 0; i < grid.r_size(); ++i) {
        for (std::size_t j = 0; j < grid.f_size(); ++j) {
            const ComplexVector a = make_atom(grid.r_values()[i], grid.f_values()[j], 9);
            const double direct = (B.adjoint() * a).squaredNorm();
            CHECK(E(static_cast<Index>(i), static_cast<Index>(j)) == Approx(direct).epsilon(1e-11));
            CHECK(atom_energy(B, grid.r_values()[i], grid.f_values()[j]) == Approx(direct).epsilon(1e-11));
        }
    }
}

TEST_CASE("peak pickers") {
    RealVector v(6);
    v << 1, 3, 2, 5, 4, 6;
    // An open end counts as a maximum when it beats its single neighbour.
    const auto p = pick_peaks_1d(v, false, 2);
    REQUIRE(p.size() == 2);
    CHECK(p[0].f_index == 5);
    CHECK(p[1].f_index == 3);
    // Periodic: index 0 now neighbours 6 and is no longer a candidate.
    const auto wrap = pick_peaks_1d(v, true, 5);
    CHECK(wrap.size() == 3);
    CHECK(wrap.back().f_index == 1);

    RealMatrix m = RealMatrix::Zero(3, 4);
    m(1, 1) = 2;
    m(0, 3) = 1;
    const auto q = pick_peaks_2d(m, true, 5);
    REQUIRE(q.size() == 2);
    CHECK(q[0].r_index == 1);
    CHECK(q[1].f_index == 3);
}

TEST_CASE("rank estimate") {
    RealVector s(4);
    s << 10, 5, 1e-4, 1e-5;
    CHECK(estimate_rank(s) == 2);
    RealVector flat = RealVector::Ones(3);
    CHECK(estimate_rank(flat) == 3);
}
