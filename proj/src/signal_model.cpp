#include "dsk/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dsk {

namespace {

void check_atom_domain(double r, double f, Index M) {
    if (!(r > 0.0 && r <= 1.0)) throw ParameterError("damping ratio must lie in (0,1]");
    if (!(f >= 0.0 && f < 1.0)) throw ParameterError("frequency must lie in [0,1)");
    if (M < 1) throw ParameterError("atom length must be at least 1");
}

bool is_undamped(double r) { return r == 1.0; }

// sum_{m<M} r^{2m} = (1 - r^{2M}) / (1 - r^2), evaluated without cancellation.
double geometric_energy(double r, Index M) {
    if (is_undamped(r)) return static_cast<double>(M);
    const double lr = std::log(r);
    return std::expm1(2.0 * static_cast<double>(M) * lr) / std::expm1(2.0 * lr);
}

} // namespace

ComplexVector make_unnormalized_atom(double r, double f, Index M) {
    check_atom_domain(r, f, M);
    ComplexVector a(M);
    const double w = 2.0 * std::numbers::pi * f;
    for (Index m = 0; m < M; ++m) {
        const double md = static_cast<double>(m);
        a(m) = std::pow(r, md) * cplx(std::cos(w * md), std::sin(w * md));
    }
    return a;
}

ComplexVector make_atom(double r, double f, Index M) {
    ComplexVector a = make_unnormalized_atom(r, f, M);
    a *= 1.0 / std::sqrt(geometric_energy(r, M));
    return a;
}

cplx tilde_coeff(cplx c, double r, Index M) {
    check_atom_domain(r, 0.0, M);
    return c * std::sqrt(geometric_energy(r, M));
}

ComplexMatrix atom_matrix(const SpectralParams& params, Index M) {
    ComplexMatrix A(M, static_cast<Index>(params.size()));
    for (std::size_t k = 0; k < params.size(); ++k) {
        A.col(static_cast<Index>(k)) = make_atom(params[k].r, params[k].f, M);
    }
    return A;
}

ComplexMatrix synth_data_matrix(const SpectralParams& params, const ModeMatrix& phi, Index M) {
    if (static_cast<Index>(params.size()) != phi.cols()) {
        throw DimensionError("mode matrix column count differs from number of modes");
    }
    if (!params.has_amplitudes()) throw ParameterError("data synthesis needs amplitudes");
    if (M < 1) throw ParameterError("M must be at least 1");
    ComplexMatrix X = ComplexMatrix::Zero(M, phi.rows());
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto& mode = params[k];
        const cplx ct = tilde_coeff(*mode.c, mode.r, M);
        X.noalias() += (ct * make_atom(mode.r, mode.f, M)) *
                       phi.phi().col(static_cast<Index>(k)).transpose();
    }
    return X;
}

ComplexVector synth_smv_signal(const SpectralParams& params, Index L) {
    if (!params.has_amplitudes()) throw ParameterError("signal synthesis needs amplitudes");
    ComplexVector y = ComplexVector::Zero(L);
    for (const auto& mode : params) {
        y += *mode.c * make_unnormalized_atom(mode.r, mode.f, L);
    }
    return y;
}

ComplexMatrix make_hankel(const ComplexVector& y, Index M) {
    const Index L = y.size();
    if (M < 1 || M > L) throw DimensionError("Hankel row count must satisfy 1 <= M <= L");
    const Index N = L - M + 1;
    ComplexMatrix H(M, N);
    for (Index j = 0; j < N; ++j)
        for (Index i = 0; i < M; ++i) H(i, j) = y(i + j);
    return H;
}

SampleMask sample_mask(Index m, Index n, std::size_t count, std::uint64_t seed) {
    if (m <= 0 || n <= 0) throw DimensionError("mask dimensions must be positive");
    const auto total = static_cast<std::size_t>(m * n);
    if (count > total) throw ParameterError("sample count exceeds matrix size");
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    picked.reserve(count);
    Rng rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
    std::vector<std::pair<Index, Index>> idx;
    idx.reserve(count);
    for (auto lin : picked) {
        idx.emplace_back(static_cast<Index>(lin % static_cast<std::size_t>(m)),
                         static_cast<Index>(lin / static_cast<std::size_t>(m)));
    }
    return SampleMask(m, n, std::move(idx));
}

ComplexMatrix add_noise(const ComplexMatrix& X, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw ParameterError("noise level must be nonnegative");
    ComplexMatrix Y = X;
    if (sigma == 0.0) return Y;
    Rng rng(seed);
    const double var = sigma * sigma;
    for (Index j = 0; j < Y.cols(); ++j)
        for (Index i = 0; i < Y.rows(); ++i) Y(i, j) += complex_normal(rng, var);
    return Y;
}

double snr_db(const ComplexMatrix& clean, const ComplexMatrix& noisy) {
    return 10.0 * std::log10(clean.squaredNorm() / (noisy - clean).squaredNorm());
}

ModeMatrix gaussian_modes(Index N, Index K, Rng& rng) {
    ComplexMatrix raw(N, K);
    for (Index k = 0; k < K; ++k)
        for (Index n = 0; n < N; ++n) raw(n, k) = complex_normal(rng);
    return ModeMatrix::normalized(std::move(raw));
}

ModeMatrix fourier_modes(Index N, Index K, double phi11) {
    if (K > N) throw DimensionError("cannot take more DFT columns than rows");
    ComplexMatrix raw(N, K);
    for (Index k = 0; k < K; ++k) {
        for (Index n = 0; n < N; ++n) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(n * k) /
                               static_cast<double>(N);
            raw(n, k) = cplx(std::cos(ang), std::sin(ang));
        }
    }
    raw(0, 0) = phi11;
    return ModeMatrix::normalized(std::move(raw));
}

std::vector<cplx> gaussian_amplitudes(std::size_t K, Rng& rng) {
    std::vector<cplx> c(K);
    for (auto& v : c) {
        do {
            v = complex_normal(rng);
        } while (v == cplx{0.0, 0.0});
    }
    return c;
}

} // namespace dsk
