#pragma once

#include <optional>
#include <string>

#include "dsk/anm.hpp"
#include "dsk/core.hpp"
#include "dsk/dualpoly.hpp"
#include "dsk/grid.hpp"
#include "dsk/nnm.hpp"

namespace dsk {

/// Output of a parameter estimator. `params` holds the estimated (r,f) pairs
/// without amplitudes; `failure` is non-empty when the estimator could not
/// produce an estimate.
struct Estimate {
    SpectralParams params;
    PeakSet peaks;
    std::string failure;

    [[nodiscard]] bool ok() const noexcept { return failure.empty(); }
};

/// NN-MUSIC: certificate U V^H of the rank-K data, level-1 peaks.
Estimate nn_music(const ComplexMatrix& X, Index K, const RFGrid& grid,
                  const PeakOptions& opts = {});

/// MD-MUSIC back end: level-1 peaks of a completion certificate, followed by
/// the false-peak filter when the mask is not full.
Estimate md_music(const CompletionResult& solve, const ComplexMatrix& observed,
                  const SampleMask& mask, const RFGrid& grid, const PeakOptions& opts = {});

/// Two-step NNM+MUSIC: K largest peaks of ||U_s^H a|| for the completed matrix.
Estimate nnm_music(const ComplexMatrix& Xhat, Index K, const RFGrid& grid);

/// Two-step NNM+ESPRIT on the completed matrix.
Estimate nnm_esprit(const ComplexMatrix& Xhat, Index K);

/// MUSIC on the zero-filled observations (K largest peaks).
Estimate mn_music_estimate(const ComplexMatrix& observed, const SampleMask& mask, Index K,
                           const RFGrid& grid);

/// Nuclear-norm denoising, then the K largest peaks of its certificate.
Estimate denoise_music(const ComplexMatrix& Y, double lambda, Index K, const RFGrid& grid);

/// Frequencies from an ANM certificate: K largest local maxima of the
/// undamped dual polynomial on j/(oversample*M), refined. Damping is reported
/// as 1.
Estimate anm_frequencies(const AnmResult& solve, Index K, Index oversample = 8);

} // namespace dsk
