#include "dsk/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "dsk/atom_energy.hpp"
#include "dsk/signal_model.hpp"

namespace dsk {

namespace {

double capped_reciprocal(double x) {
    if (!(x > 0.0)) return kReciprocalCap;
    return std::min(1.0 / x, kReciprocalCap);
}

bool peak_before(const GridPeak& a, const GridPeak& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.f_index != b.f_index) return a.f_index < b.f_index;
    return a.r_index < b.r_index;
}

} // namespace

SubspacePair split_basis(const ComplexMatrix& unitary, Index K) {
    const Index M = unitary.rows();
    if (K < 0 || K > M) throw ParameterError("signal dimension out of range");
    return {unitary.leftCols(K), unitary.rightCols(M - K)};
}

ComplexMatrix sample_autocorrelation(const ComplexVector& y, Index M) {
    const Index L = y.size();
    if (M < 1 || L <= M) throw DimensionError("autocorrelation needs L > M >= 1");
    const ComplexMatrix H = make_hankel(y, M);
    return (H * H.adjoint()) / static_cast<double>(L - M + 1);
}

SubspacePair autocorrelation_subspaces(const ComplexMatrix& R, Index K) {
    if (R.rows() != R.cols()) throw DimensionError("autocorrelation matrix must be square");
    if (K < 1 || K >= R.rows()) throw ParameterError("need 1 <= K < M");
    return split_basis(hermitian_eig_descending(R).vectors, K);
}

SubspacePair mmv_music(const ComplexMatrix& Y, Index K) {
    if (K < 1 || K >= Y.rows()) throw ParameterError("MMV MUSIC needs 1 <= K < M");
    return split_basis(full_left_basis(Y), K);
}

SubspacePair mn_music(const ComplexMatrix& observed, const SampleMask& mask, Index K) {
    require_same_shape(observed, mask);
    if (mask.empty()) throw ParameterError("MN-MUSIC on an empty sample set");
    return mmv_music(mask.project(observed), K);
}

RealVector music_spectrum(const ComplexMatrix& noise_basis, std::span<const double> f_grid) {
    const Index M = noise_basis.rows();
    RealVector out(static_cast<Index>(f_grid.size()));
    for (std::size_t j = 0; j < f_grid.size(); ++j) {
        const ComplexVector a = make_atom(1.0, f_grid[j], M);
        out(static_cast<Index>(j)) = capped_reciprocal((noise_basis.adjoint() * a).squaredNorm());
    }
    return out;
}

RealMatrix dmusic_imaging(const ComplexMatrix& noise_basis, const RFGrid& grid) {
    RealMatrix e = atom_energy_on_grid(noise_basis, grid);
    return e.unaryExpr([](double x) { return capped_reciprocal(std::sqrt(std::max(x, 0.0))); });
}

SpectralParams esprit(const ComplexMatrix& X, Index K) {
    const Index M = X.rows();
    if (K < 1 || M < K + 1 || K > X.cols()) throw ParameterError("ESPRIT needs 1 <= K <= min(M-1, N)");
    const SvdFactors f = thin_svd(X);
    if (!(f.S(0) > 0.0) || f.S(K - 1) <= 1e-12 * f.S(0)) {
        throw EstimationError("ESPRIT model order exceeds the numerical rank");
    }
    const ComplexMatrix Us = f.U.leftCols(K);
    const ComplexMatrix U1 = Us.topRows(M - 1);
    const ComplexMatrix U2 = Us.bottomRows(M - 1);
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(U1);
    qr.setThreshold(1e-10);
    if (qr.rank() < K) throw EstimationError("shift-invariance system is rank deficient");
    const ComplexMatrix Psi = qr.solve(U2);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(Psi, false);
    if (es.info() != Eigen::Success) throw EstimationError("rotation operator eigensolver failed");

    std::vector<Mode> modes;
    for (Index k = 0; k < K; ++k) {
        const cplx z = es.eigenvalues()(k);
        const double mag = std::abs(z);
        if (!(mag > 0.0) || !std::isfinite(mag)) throw EstimationError("degenerate ESPRIT pole");
        double freq = std::arg(z) / (2.0 * std::numbers::pi);
        if (freq < 0.0) freq += 1.0;
        if (freq >= 1.0) freq -= 1.0;
        modes.push_back({std::min(mag, 1.0), freq, std::nullopt});
    }
    try {
        return SpectralParams(std::move(modes));
    } catch (const ParameterError& e) {
        throw EstimationError(std::string("ESPRIT produced invalid parameters: ") + e.what());
    }
}

Index estimate_rank(const RealVector& s, double ratio) {
    for (Index k = 1; k < s.size(); ++k) {
        if (s(k) <= 0.0 || s(k - 1) / s(k) > ratio) return k;
    }
    return s.size();
}

std::vector<GridPeak> pick_peaks_1d(const RealVector& values, bool periodic, std::size_t K) {
    const Index n = values.size();
    std::vector<GridPeak> peaks;
    for (Index j = 0; j < n; ++j) {
        bool is_max = true;
        for (Index d : {Index{-1}, Index{1}}) {
            Index k = j + d;
            if (k < 0 || k >= n) {
                if (!periodic) continue;
                k = (k + n) % n;
            }
            if (k != j && values(k) >= values(j)) is_max = false;
        }
        if (is_max) peaks.push_back({0, j, values(j)});
    }
    std::sort(peaks.begin(), peaks.end(), peak_before);
    if (peaks.size() > K) peaks.resize(K);
    return peaks;
}

std::vector<GridPeak> pick_peaks_2d(const RealMatrix& values, bool f_periodic, std::size_t K) {
    const Index R = values.rows(), F = values.cols();
    std::vector<GridPeak> peaks;
    for (Index i = 0; i < R; ++i) {
        for (Index j = 0; j < F; ++j) {
            const double v = values(i, j);
            bool is_max = true;
            for (Index di = -1; di <= 1 && is_max; ++di) {
                for (Index dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const Index ii = i + di;
                    Index jj = j + dj;
                    if (ii < 0 || ii >= R) continue;
                    if (jj < 0 || jj >= F) {
                        if (!f_periodic) continue;
                        jj = (jj + F) % F;
                    }
                    if (ii == i && jj == j) continue;
                    if (values(ii, jj) >= v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) peaks.push_back({i, j, v});
        }
    }
    std::sort(peaks.begin(), peaks.end(), peak_before);
    if (peaks.size() > K) peaks.resize(K);
    return peaks;
}

} // namespace dsk
