#include "dsk/estimators.hpp"

#include <vector>

#include "dsk/linalg.hpp"
#include "dsk/subspace.hpp"

namespace dsk {

namespace {

Estimate from_peaks(PeakSet peaks) {
    Estimate e;
    e.peaks = std::move(peaks);
    try {
        e.params = e.peaks.to_params();
    } catch (const ParameterError& err) {
        e.failure = err.what();
    }
    if (e.ok() && e.peaks.count_mismatch) e.failure = "peak count differs from K";
    return e;
}

Estimate failed(std::string why) {
    Estimate e;
    e.failure = std::move(why);
    return e;
}

} // namespace

Estimate nn_music(const ComplexMatrix& X, Index K, const RFGrid& grid, const PeakOptions& opts) {
    DualCertificate Q;
    try {
        Q = full_data_dual(X, K);
    } catch (const RankMismatchError& err) {
        return failed(err.what());
    }
    PeakOptions o = opts;
    o.expected_K = static_cast<std::size_t>(K);
    return from_peaks(locate_peaks(Q.Q, eval_dual_poly(Q, grid), grid, o));
}

Estimate md_music(const CompletionResult& solve, const ComplexMatrix& observed,
                  const SampleMask& mask, const RFGrid& grid, const PeakOptions& opts) {
    const ComplexMatrix& Q = solve.certificate.Q;
    PeakOptions o = opts;
    const auto expected = o.expected_K;
    o.expected_K.reset();
    PeakSet peaks = locate_peaks(Q, eval_dual_poly(Q, grid), grid, o);
    if (!mask.is_full() && !peaks.empty()) peaks = false_peak_filter(peaks, observed, mask);
    if (expected) peaks.count_mismatch = peaks.size() != *expected;
    return from_peaks(std::move(peaks));
}

Estimate nnm_music(const ComplexMatrix& Xhat, Index K, const RFGrid& grid) {
    const SvdFactors f = truncated_svd(Xhat, K);
    return from_peaks(top_k_peaks(f.U, eval_dual_poly(f.U, grid), grid, static_cast<std::size_t>(K)));
}

Estimate nnm_esprit(const ComplexMatrix& Xhat, Index K) {
    Estimate e;
    try {
        e.params = esprit(Xhat, K);
    } catch (const EstimationError& err) {
        return failed(err.what());
    }
    for (const auto& m : e.params) e.peaks.peaks.push_back({m.r, m.f, 1.0});
    return e;
}

Estimate mn_music_estimate(const ComplexMatrix& observed, const SampleMask& mask, Index K,
                           const RFGrid& grid) {
    const SubspacePair sp = mn_music(observed, mask, K);
    return from_peaks(
        top_k_peaks(sp.signal, eval_dual_poly(sp.signal, grid), grid, static_cast<std::size_t>(K)));
}

Estimate denoise_music(const ComplexMatrix& Y, double lambda, Index K, const RFGrid& grid) {
    const DenoiseResult d = nnm_denoise(Y, lambda);
    const ComplexMatrix& Q = d.certificate.Q;
    return from_peaks(top_k_peaks(Q, eval_dual_poly(Q, grid), grid, static_cast<std::size_t>(K)));
}

Estimate anm_frequencies(const AnmResult& solve, Index K, Index oversample) {
    const Index M = solve.certificate.Q.rows();
    const Index F = oversample * M;
    std::vector<double> f_grid(static_cast<std::size_t>(F));
    for (Index j = 0; j < F; ++j) f_grid[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(F);
    const RealVector values = anm_dual_poly(solve.certificate, f_grid);
    return from_peaks(top_k_peaks_f(solve.certificate.Q, values, f_grid, true,
                                    static_cast<std::size_t>(K)));
}

} // namespace dsk
