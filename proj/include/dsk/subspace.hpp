#pragma once

#include <span>
#include <vector>

#include "dsk/core.hpp"
#include "dsk/grid.hpp"
#include "dsk/linalg.hpp"

namespace dsk {

/// Pseudospectrum values are reported as min(1/x, kReciprocalCap).
inline constexpr double kReciprocalCap = 1e15;

/// Orthonormal bases of the signal subspace (M x K) and its complement
/// (M x (M-K)).
struct SubspacePair {
    ComplexMatrix signal;
    ComplexMatrix noise;
};

/// Splits a full M x M unitary basis after its first K columns.
SubspacePair split_basis(const ComplexMatrix& unitary, Index K);

/// (1/(L-M+1)) sum_t y(t:t+M-1) y(t:t+M-1)^H. Requires L > M.
ComplexMatrix sample_autocorrelation(const ComplexVector& y, Index M);

/// Signal/noise split from the eigenvectors of a Hermitian matrix (largest K
/// eigenvalues form the signal subspace).
SubspacePair autocorrelation_subspaces(const ComplexMatrix& R, Index K);

/// MMV MUSIC: SVD of the data matrix, top-K left singular vectors as signal.
/// Requires K < M.
SubspacePair mmv_music(const ComplexMatrix& Y, Index K);

/// MUSIC applied to the zero-filled partially observed matrix.
SubspacePair mn_music(const ComplexMatrix& observed, const SampleMask& mask, Index K);

/// 1 / ||Un^H a(f)||^2 over `f_grid` using undamped atoms.
RealVector music_spectrum(const ComplexMatrix& noise_basis, std::span<const double> f_grid);

/// J(r,f) = 1 / ||Un^H a(r,f)||_2 over the grid (|r| x |f|).
RealMatrix dmusic_imaging(const ComplexMatrix& noise_basis, const RFGrid& grid);

/// ESPRIT on the top-K left singular subspace of X. The least-squares
/// rotation operator's eigenvalues z_k give r = |z_k|, f = arg(z_k)/(2 pi)
/// mod 1. Amplitudes are left unset. Throws EstimationError when K exceeds
/// the numerical rank or the shift-invariance system loses rank.
SpectralParams esprit(const ComplexMatrix& X, Index K);

/// Heuristic model order: first index k with S(k-1)/S(k) > ratio, or the full
/// length when no such gap exists.
Index estimate_rank(const RealVector& singular_values, double ratio = 1e3);

struct GridPeak {
    Index r_index = 0;
    Index f_index = 0;
    double value = 0.0;
};

/// Strict local maxima of a 1-D spectrum, K largest (ties: lower frequency).
std::vector<GridPeak> pick_peaks_1d(const RealVector& values, bool periodic, std::size_t K);

/// Strict local maxima over the 8-neighbourhood, K largest (ties: lower f,
/// then lower r).
std::vector<GridPeak> pick_peaks_2d(const RealMatrix& values, bool f_periodic, std::size_t K);

} // namespace dsk
