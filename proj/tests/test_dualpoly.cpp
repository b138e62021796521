#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dsk/dualpoly.hpp"
#include "dsk/estimators.hpp"
#include "dsk/random.hpp"
#include "dsk/signal_model.hpp"

using namespace dsk;
using doctest::Approx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct BaseDraw {
    SpectralParams params;
    ComplexMatrix X;
};

BaseDraw base_draw(Index M, Index N, std::uint64_t seed) {
    Rng rng(seed);
    auto p = SpectralParams::from_lists({0.92, 0.98, 0.85}, {0.1, 0.4, 0.8}, gaussian_amplitudes(3, rng));
    ComplexMatrix X = synth_data_matrix(p, gaussian_modes(N, 3, rng), M);
    return {std::move(p), std::move(X)};
}

// Atom built directly from the definition, independent of make_atom.
ComplexVector direct_atom(double r, double f, Index M) {
    ComplexVector a(M);
    for (Index m = 0; m < M; ++m)
        a(m) = std::pow(r, static_cast<double>(m)) * std::polar(1.0, kTwoPi * f * static_cast<double>(m));
    return a.normalized();
}

ComplexVector unit_vector(Index n, std::uint64_t seed) {
    Rng rng(seed);
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_normal(rng);
    return v.normalized();
}

} // namespace

TEST_CASE("eval_dual_poly: rank-one certificate") {
    const Index M = 20;
    const ComplexVector a0 = direct_atom(0.9, 0.3, M);
    const ComplexMatrix Q = a0 * unit_vector(6, 1).adjoint();
    const RFGrid grid({0.8, 0.9, 1.0}, {0.1, 0.3, 0.55});
    const RealMatrix v = eval_dual_poly(Q, grid);
    REQUIRE(v.rows() == 3);
    REQUIRE(v.cols() == 3);
    CHECK(v(1, 1) == Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double expect = std::abs(direct_atom(grid.r_values()[i], grid.f_values()[j], M).dot(a0));
            CHECK(v(static_cast<Index>(i), static_cast<Index>(j)) == Approx(expect).epsilon(1e-10));
        }
    CHECK(dual_poly_value(Q, 0.9, 0.3) == Approx(1.0).epsilon(1e-12));
    CHECK(eval_dual_poly(ComplexMatrix::Zero(M, 4), grid).maxCoeff() == 0.0);
}

TEST_CASE("eval_dual_poly: support shape must match") {
    DualCertificate q{ComplexMatrix::Zero(4, 3), SampleMask::full(3, 3)};
    CHECK_THROWS_AS(eval_dual_poly(q, RFGrid({1.0}, {0.0})), DimensionError);
}

TEST_CASE("full-data certificate of the first experiment") {
    const Index M = 50;
    const BaseDraw d = base_draw(M, 50, 21);
    const ComplexMatrix Q = full_data_dual(d.X, 3).Q;

    // The true pairs lie on the standard grid and reach 1 there.
    const RFGrid grid = RFGrid::standard(M);
    const RealMatrix v = eval_dual_poly(Q, grid);
    const auto& rs = grid.r_values();
    const auto& fs = grid.f_values();
    std::size_t hits = 0;
    for (const auto& m : d.params)
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < fs.size(); ++j)
                if (std::abs(rs[i] - m.r) < 1e-9 && wrap_distance(fs[j], m.f) < 1e-9 &&
                    v(static_cast<Index>(i), static_cast<Index>(j)) >= 1.0 - 1e-8)
                    ++hits;
    CHECK(hits == 3);
    CHECK(v.maxCoeff() <= 1.0 + 1e-10);

    // Strictly below 1 off the support at resolution 1e-3. The margin is
    // small: the neighbour at dr = 1e-3 sits on the flat r-ridge of a lobe.
    const RFGrid fine = RFGrid::uniform(0.75, 1.0, 1e-3, 1000);
    const double off = off_support_max(eval_dual_poly(Q, fine), fine, d.params);
    MESSAGE("off-support margin " << 1.0 - off);
    CHECK(off > 0.99);
    CHECK(off < 1.0 - 1e-6);
}

TEST_CASE("off_support_max") {
    const RFGrid grid = RFGrid::uniform(0.9, 1.0, 0.05, 8);
    RealMatrix v = RealMatrix::Constant(3, 8, 0.1);
    v(1, 2) = 1.0;  // nearest cell to the pair
    v(1, 3) = 0.99; // its neighbour still counts
    v(2, 6) = 0.7;
    const auto sup = SpectralParams::from_lists({0.96}, {0.26});
    CHECK(off_support_max(v, grid, sup) == 0.99);
    v(1, 3) = 0.1;
    CHECK(off_support_max(v, grid, sup) == 0.7);
    CHECK(off_support_max(RealMatrix::Constant(1, 1, 1.0), RFGrid({0.9}, {0.2}), sup) == 0.0);
    CHECK_THROWS_AS(off_support_max(RealMatrix::Zero(2, 8), grid, sup), DimensionError);
}

TEST_CASE("locate_peaks recovers the true pairs") {
    const Index M = 50;
    const BaseDraw d = base_draw(M, 50, 22);
    const ComplexMatrix Q = full_data_dual(d.X, 3).Q;
    const RFGrid grid = RFGrid::standard(M);
    const PeakSet peaks = locate_peaks(Q, eval_dual_poly(Q, grid), grid);
    REQUIRE(peaks.size() == 3);
    CHECK(!peaks.count_mismatch);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(peaks.peaks[k].r - d.params[k].r) < 1e-6);
        CHECK(wrap_distance(peaks.peaks[k].f, d.params[k].f) < 1e-6);
    }

    PeakOptions opts;
    opts.expected_K = 4;
    CHECK(locate_peaks(Q, eval_dual_poly(Q, grid), grid, opts).count_mismatch);
}

TEST_CASE("locate_peaks: nothing reaches the level") {
    const Index M = 20;
    const ComplexMatrix Q = 0.9 * direct_atom(0.95, 0.2, M) * unit_vector(3, 2).adjoint();
    const RFGrid grid = RFGrid::standard(M);
    CHECK(locate_peaks(Q, eval_dual_poly(Q, grid), grid).empty());
    CHECK(locate_peaks(ComplexMatrix::Zero(M, 3), RealMatrix::Zero(static_cast<Index>(grid.r_size()),
                                                                    static_cast<Index>(grid.f_size())),
                       grid)
              .empty());
}

TEST_CASE("threshold_clusters groups and wraps") {
    const RFGrid grid = RFGrid::uniform(0.9, 1.0, 0.05, 8);
    RealMatrix v = RealMatrix::Zero(3, 8);
    v(0, 0) = 0.99;
    v(0, 7) = 0.995; // neighbour of column 0 through the wrap
    v(2, 3) = 0.98;
    v(2, 4) = 0.98;
    v(1, 5) = 0.5;
    const auto c = threshold_clusters(v, grid, 0.97);
    REQUIRE(c.size() == 2);
    CHECK(c[0].f_index == 7);
    CHECK(c[0].value == 0.995);
    // Tie inside the second cluster goes to the lower f.
    CHECK(c[1].f_index == 3);
    CHECK_THROWS_AS(threshold_clusters(v, grid, 1.5), ParameterError);
    CHECK_THROWS_AS(threshold_clusters(RealMatrix::Zero(2, 8), grid, 0.9), DimensionError);
}

TEST_CASE("refine_peak") {
    const Index M = 30;
    const double r0 = 0.937, f0 = 0.4123;
    const ComplexMatrix Q = direct_atom(r0, f0, M) * unit_vector(4, 3).adjoint();

    // From an adjacent grid cell.
    const Peak p = refine_peak(Q, 0.936, 0.4123 + 1.0 / (8 * M));
    CHECK(std::abs(p.r - r0) < 1e-7);
    CHECK(wrap_distance(p.f, f0) < 1e-7);
    CHECK(p.value == Approx(1.0).epsilon(1e-12));

    // Starting at the maximizer leaves it in place.
    const Peak q = refine_peak(Q, r0, f0);
    CHECK(std::abs(q.r - r0) < 1e-7);
    CHECK(wrap_distance(q.f, f0) < 1e-7);

    // A zero certificate has nothing to climb.
    const Peak z = refine_peak(ComplexMatrix::Zero(M, 4), 0.9, 0.2);
    CHECK(z.r == 0.9);
    CHECK(z.f == 0.2);

    // Never below the starting value, on a generic certificate.
    Rng rng(5);
    ComplexMatrix G(M, 4);
    for (Index j = 0; j < 4; ++j)
        for (Index i = 0; i < M; ++i) G(i, j) = complex_normal(rng);
    for (double f : {0.05, 0.31, 0.77}) {
        const Peak g = refine_peak(G, 0.95, f);
        CHECK(g.value >= dual_poly_value(G, 0.95, f) - 1e-15);
    }

    const ComplexMatrix Qu = direct_atom(1.0, 0.61, M) * unit_vector(2, 4).adjoint();
    const Peak u = refine_peak_f(Qu, 0.61 + 1e-3);
    CHECK(u.r == 1.0);
    CHECK(wrap_distance(u.f, 0.61) < 1e-7);
}

TEST_CASE("dual polynomial is phase invariant") {
    const BaseDraw d = base_draw(20, 10, 6);
    const ComplexMatrix Q = full_data_dual(d.X, 3).Q;
    const ComplexMatrix Qp = Q * std::polar(1.0, 0.7);
    const RFGrid grid = RFGrid::standard(20);
    CHECK((eval_dual_poly(Q, grid) - eval_dual_poly(Qp, grid)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("false_peak_filter") {
    const Index M = 30;
    const BaseDraw d = base_draw(M, 20, 7);
    PeakSet cand;
    for (const auto& m : d.params) cand.peaks.push_back({m.r, m.f, 1.0});
    cand.peaks.push_back({0.9, 0.6, 1.0}); // spurious

    const SampleMask full = SampleMask::full(M, 20);
    const PeakSet kept = false_peak_filter(cand, d.X, full);
    REQUIRE(kept.size() == 3);
    CHECK(!kept.ill_conditioned);
    for (std::size_t k = 0; k < 3; ++k) CHECK(kept.peaks[k].f == d.params[k].f);

    const SampleMask part = sample_mask(M, 20, 450, 8);
    CHECK(false_peak_filter(cand, part.project(d.X), part).size() == 3);

    PeakSet dup = cand;
    dup.peaks.push_back(cand.peaks[0]);
    CHECK(false_peak_filter(dup, d.X, full).ill_conditioned);

    CHECK_THROWS_AS(false_peak_filter(PeakSet{}, d.X, full), ParameterError);
    CHECK_THROWS_AS(false_peak_filter(cand, d.X, SampleMask(M, 20, {})), ParameterError);
}

TEST_CASE("PeakSet::to_params rejects coincident peaks") {
    PeakSet s;
    s.peaks = {{0.9, 0.2, 1.0}, {0.9, 0.2, 1.0}};
    CHECK_THROWS_AS((void)s.to_params(), ParameterError);
}

TEST_CASE("estimators on full data") {
    const Index M = 50;
    const BaseDraw d = base_draw(M, 50, 9);
    const RFGrid grid = RFGrid::standard(M);

    const Estimate nn = nn_music(d.X, 3, grid);
    REQUIRE(nn.ok());
    REQUIRE(nn.params.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(nn.params[k].r - d.params[k].r) < 1e-6);
        CHECK(wrap_distance(nn.params[k].f, d.params[k].f) < 1e-6);
    }

    const Estimate es = nnm_esprit(d.X, 3);
    REQUIRE(es.ok());
    REQUIRE(es.params.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(es.params[k].r - d.params[k].r) < 1e-8);
        CHECK(wrap_distance(es.params[k].f, d.params[k].f) < 1e-8);
    }

    const Estimate mu = nnm_music(d.X, 3, grid);
    REQUIRE(mu.ok());
    REQUIRE(mu.params.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(wrap_distance(mu.params[k].f, d.params[k].f) < 1e-4);
}

TEST_CASE("md_music with 20% missing") {
    const Index M = 50;
    const BaseDraw d = base_draw(M, 50, 10);
    const SampleMask mask = sample_mask(M, 50, 2000, 11);
    const ComplexMatrix obs = mask.project(d.X);
    const CompletionResult c = nnm_complete(obs, mask);
    const Estimate e = md_music(c, obs, mask, RFGrid::standard(M));
    REQUIRE(e.ok());
    REQUIRE(e.params.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(e.params[k].r - d.params[k].r) < 1e-5);
        CHECK(wrap_distance(e.params[k].f, d.params[k].f) < 1e-5);
    }
}
