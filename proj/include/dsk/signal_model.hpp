#pragma once

#include <cstdint>
#include <vector>

#include "dsk/core.hpp"
#include "dsk/random.hpp"

namespace dsk {


/// Unit-norm sampled damped exponential a(r,f) of length M:
/// entry m is s * r^m * exp(j 2 pi f m), s chosen so that the vector has unit
/// Euclidean norm.
ComplexVector make_atom(double r, double f, Index M);

/// The same vector without normalization: [1, z, z^2, ..., z^{M-1}] with
/// z = r exp(j 2 pi f).
ComplexVector make_unnormalized_atom(double r, double f, Index M);

/// Energy scaling of an amplitude: c * sqrt(sum_m r^{2m}).
cplx tilde_coeff(cplx c, double r, Index M);

/// M x K matrix whose columns are the unit atoms of `params`.
ComplexMatrix atom_matrix(const SpectralParams& params, Index M);

/// Noiseless MMV data matrix X = sum_k c~_k a(r_k,f_k) phi_k^T (M x N).
ComplexMatrix synth_data_matrix(const SpectralParams& params, const ModeMatrix& phi, Index M);

/// Single-channel samples x(t) = sum_k c_k r_k^t exp(j 2 pi f_k t), t = 0..L-1.
ComplexVector synth_smv_signal(const SpectralParams& params, Index L);

/// M x (L-M+1) Hankel matrix H(i,j) = y(i+j).
ComplexMatrix make_hankel(const ComplexVector& y, Index M);

/// `count` distinct entries of an m x n matrix drawn uniformly among all
/// subsets of that size; deterministic for a given seed.
SampleMask sample_mask(Index m, Index n, std::size_t count, std::uint64_t seed);

/// Y = X + E with E i.i.d. circularly-symmetric complex Gaussian of per-entry
/// variance sigma^2.
ComplexMatrix add_noise(const ComplexMatrix& X, double sigma, std::uint64_t seed);

/// 10 log10(||clean||_F^2 / ||noisy - clean||_F^2).
double snr_db(const ComplexMatrix& clean, const ComplexMatrix& noisy);

/// N x K mode matrix with i.i.d. complex Gaussian entries, columns normalized.
ModeMatrix gaussian_modes(Index N, Index K, Rng& rng);

/// First K columns of the N-point DFT matrix, with entry (0,0) of the first
/// column replaced by `phi11` before column normalization.
ModeMatrix fourier_modes(Index N, Index K, double phi11 = 1.0);

/// K i.i.d. CN(0,1) amplitudes (redrawn if exactly zero).
std::vector<cplx> gaussian_amplitudes(std::size_t K, Rng& rng);

} // namespace dsk
