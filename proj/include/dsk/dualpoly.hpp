#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dsk/core.hpp"
#include "dsk/grid.hpp"
#include "dsk/nnm.hpp"
#include "dsk/subspace.hpp"

namespace dsk {

/// ||Q^H a(r_i, f_j)||_2 over the grid (|r| x |f|); the atom length is Q.rows().
/// Throws DimensionError when the certificate's support does not match Q.
RealMatrix eval_dual_poly(const DualCertificate& Q, const RFGrid& grid);
RealMatrix eval_dual_poly(const ComplexMatrix& Q, const RFGrid& grid);

/// ||Q^H a(r,f)||_2 at one point.
double dual_poly_value(const ComplexMatrix& Q, double r, double f);

struct Peak {
    double r = 1.0;
    double f = 0.0;
    double value = 0.0;
};

/// Localized parameter pairs with diagnostic flags. Peaks are sorted by f,
/// then r.
struct PeakSet {
    std::vector<Peak> peaks;
    /// Set when an expected count was supplied and not matched.
    bool count_mismatch = false;
    /// Set by false_peak_filter when the candidate atoms are rank deficient.
    bool ill_conditioned = false;

    [[nodiscard]] std::size_t size() const noexcept { return peaks.size(); }
    [[nodiscard]] bool empty() const noexcept { return peaks.empty(); }
    /// (r,f) pairs as parameters without amplitudes. Throws ParameterError if
    /// two peaks coincide.
    [[nodiscard]] SpectralParams to_params() const;
};

struct PeakOptions {
    /// Grid local maxima below this value are not refined.
    double candidate_floor = 0.5;
    /// A refined peak is kept when its value reaches this level.
    double accept_threshold = 1.0 - 1e-6;
    /// Bracket width at which golden-section refinement stops.
    double refine_tol = 1e-10;
    /// Refined peaks closer than this in both r and f are merged.
    double merge_distance = 1e-6;
    std::optional<std::size_t> expected_K;
};

/// Cells with value >= threshold grouped by 8-connectivity (f wraps when the
/// grid is periodic); one representative per cluster, the maximum, ties to
/// lower f then lower r. Sorted by decreasing value.
std::vector<GridPeak> threshold_clusters(const RealMatrix& values, const RFGrid& grid,
                                         double threshold);

/// Local maximizer of ||Q^H a(r,f)||_2 near (r0,f0) by alternating
/// golden-section searches on brackets of half-width (hr, hf), repeated until
/// the point stops moving. The result never has a lower value than the start.
Peak refine_peak(const ComplexMatrix& Q, double r0, double f0, double hr = 0.002,
                 double hf = 1e-3, double tol = 1e-10);

/// Same search along f only, with r fixed to 1 (undamped atoms).
Peak refine_peak_f(const ComplexMatrix& Q, double f0, double hf = 1e-3, double tol = 1e-10);

/// Level-1 localization: grid local maxima above `candidate_floor` are
/// clustered, refined and kept when they reach `accept_threshold`.
PeakSet locate_peaks(const ComplexMatrix& Q, const RealMatrix& values, const RFGrid& grid,
                     const PeakOptions& opts = {});

/// The K largest grid local maxima, each refined, without a level test.
PeakSet top_k_peaks(const ComplexMatrix& Q, const RealMatrix& values, const RFGrid& grid,
                    std::size_t K, double refine_tol = 1e-10);

/// K largest local maxima of a 1-D undamped dual polynomial, refined in f.
PeakSet top_k_peaks_f(const ComplexMatrix& Q, const RealVector& values,
                      std::span<const double> f_grid, bool periodic, std::size_t K,
                      double refine_tol = 1e-10);

/// Largest grid value outside the cells nearest to the pairs in `support`;
/// 0 when the grid has no other cell.
double off_support_max(const RealMatrix& values, const RFGrid& grid, const SpectralParams& support);

/// Least-squares fit of the observed entries by the candidate atoms; drops
/// candidates whose coefficient row norm falls below 1e-6 of the largest.
/// Throws ParameterError on empty candidates or an empty sample set.
PeakSet false_peak_filter(const PeakSet& candidates, const ComplexMatrix& observed,
                          const SampleMask& mask);

} // namespace dsk
