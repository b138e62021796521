#include "dsk/dualpoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/QR>

#include "dsk/atom_energy.hpp"
#include "dsk/linalg.hpp"
#include "dsk/signal_model.hpp"

namespace dsk {

namespace {

constexpr double kMinRadius = 1e-6;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

double wrap01(double f) {
    f -= std::floor(f);
    return f >= 1.0 ? 0.0 : f;
}

bool cell_before(const GridPeak& a, const GridPeak& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.f_index != b.f_index) return a.f_index < b.f_index;
    return a.r_index < b.r_index;
}

// Maximizes g on [a, b]; returns (argmax, value) among evaluated points.
std::pair<double, double> golden_max(const std::function<double(double)>& g, double a, double b,
                                     double tol) {
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > tol) {
        if (gc >= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - kInvPhi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + kInvPhi * (b - a);
            gd = g(d);
        }
    }
    return gc >= gd ? std::pair{c, gc} : std::pair{d, gd};
}

// Grid cells that are maxima over their 8-neighbourhood and at least `floor`,
// with adjacent plateau cells merged. Sorted by decreasing value.
std::vector<GridPeak> grid_candidates(const RealMatrix& values, bool periodic, double floor) {
    const Index R = values.rows(), F = values.cols();
    auto neighbours = [&](Index i, Index j, auto&& visit) {
        for (Index di = -1; di <= 1; ++di) {
            for (Index dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0) continue;
                const Index ii = i + di;
                Index jj = j + dj;
                if (ii < 0 || ii >= R) continue;
                if (jj < 0 || jj >= F) {
                    if (!periodic) continue;
                    jj = (jj + F) % F;
                }
                if (ii == i && jj == j) continue;
                visit(ii, jj);
            }
        }
    };
    std::vector<unsigned char> cand(static_cast<std::size_t>(R * F), 0);
    for (Index i = 0; i < R; ++i) {
        for (Index j = 0; j < F; ++j) {
            const double v = values(i, j);
            if (!(v >= floor)) continue;
            bool is_max = true;
            neighbours(i, j, [&](Index ii, Index jj) {
                if (values(ii, jj) > v) is_max = false;
            });
            if (is_max) cand[static_cast<std::size_t>(j * R + i)] = 1;
        }
    }
    std::vector<GridPeak> reps;
    std::vector<std::pair<Index, Index>> stack;
    for (Index j = 0; j < F; ++j) {
        for (Index i = 0; i < R; ++i) {
            if (!cand[static_cast<std::size_t>(j * R + i)]) continue;
            GridPeak best{i, j, values(i, j)};
            cand[static_cast<std::size_t>(j * R + i)] = 0;
            stack.assign(1, {i, j});
            while (!stack.empty()) {
                const auto [ci, cj] = stack.back();
                stack.pop_back();
                const GridPeak here{ci, cj, values(ci, cj)};
                if (cell_before(here, best)) best = here;
                neighbours(ci, cj, [&](Index ii, Index jj) {
                    auto& flag = cand[static_cast<std::size_t>(jj * R + ii)];
                    if (flag) {
                        flag = 0;
                        stack.emplace_back(ii, jj);
                    }
                });
            }
            reps.push_back(best);
        }
    }
    std::sort(reps.begin(), reps.end(), cell_before);
    return reps;
}

bool same_point(const Peak& a, const Peak& b, double tol) {
    return std::abs(a.r - b.r) <= tol && wrap_distance(a.f, b.f) <= tol;
}

void sort_peaks(std::vector<Peak>& peaks) {
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        if (a.f != b.f) return a.f < b.f;
        return a.r < b.r;
    });
}

double step_or(double step, double fallback) { return step > 0.0 ? step : fallback; }

} // namespace

SpectralParams PeakSet::to_params() const {
    std::vector<Mode> modes;
    modes.reserve(peaks.size());
    for (const auto& p : peaks) modes.push_back({p.r, p.f, std::nullopt});
    return SpectralParams(std::move(modes));
}

RealMatrix eval_dual_poly(const ComplexMatrix& Q, const RFGrid& grid) {
    if (Q.rows() < 1) throw DimensionError("certificate has no rows");
    return atom_energy_on_grid(Q, grid).cwiseSqrt();
}

RealMatrix eval_dual_poly(const DualCertificate& Q, const RFGrid& grid) {
    if (Q.support) require_same_shape(Q.Q, *Q.support);
    return eval_dual_poly(Q.Q, grid);
}

double dual_poly_value(const ComplexMatrix& Q, double r, double f) {
    return std::sqrt(std::max(atom_energy(Q, std::clamp(r, kMinRadius, 1.0), wrap01(f)), 0.0));
}

std::vector<GridPeak> threshold_clusters(const RealMatrix& values, const RFGrid& grid,
                                         double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ParameterError("threshold must lie in (0,1]");
    if (values.rows() != static_cast<Index>(grid.r_size()) ||
        values.cols() != static_cast<Index>(grid.f_size())) {
        throw DimensionError("value matrix does not match the grid");
    }
    // Every above-threshold cell is a candidate; clustering then yields the
    // connected components.
    RealMatrix masked = values;
    for (Index j = 0; j < masked.cols(); ++j)
        for (Index i = 0; i < masked.rows(); ++i)
            if (!(masked(i, j) >= threshold)) masked(i, j) = -1.0;
    const Index R = masked.rows(), F = masked.cols();
    std::vector<GridPeak> reps;
    std::vector<unsigned char> seen(static_cast<std::size_t>(R * F), 0);
    for (Index j = 0; j < F; ++j) {
        for (Index i = 0; i < R; ++i) {
            if (masked(i, j) < 0.0 || seen[static_cast<std::size_t>(j * R + i)]) continue;
            GridPeak best{i, j, masked(i, j)};
            std::vector<std::pair<Index, Index>> stack{{i, j}};
            seen[static_cast<std::size_t>(j * R + i)] = 1;
            while (!stack.empty()) {
                const auto [ci, cj] = stack.back();
                stack.pop_back();
                const GridPeak here{ci, cj, masked(ci, cj)};
                if (cell_before(here, best)) best = here;
                for (Index di = -1; di <= 1; ++di) {
                    for (Index dj = -1; dj <= 1; ++dj) {
                        const Index ii = ci + di;
                        Index jj = cj + dj;
                        if (ii < 0 || ii >= R) continue;
                        if (jj < 0 || jj >= F) {
                            if (!grid.f_periodic()) continue;
                            jj = (jj + F) % F;
                        }
                        auto& s = seen[static_cast<std::size_t>(jj * R + ii)];
                        if (!s && masked(ii, jj) >= 0.0) {
                            s = 1;
                            stack.emplace_back(ii, jj);
                        }
                    }
                }
            }
            reps.push_back(best);
        }
    }
    std::sort(reps.begin(), reps.end(), cell_before);
    return reps;
}

Peak refine_peak(const ComplexMatrix& Q, double r0, double f0, double hr, double hf, double tol) {
    double r = std::clamp(r0, kMinRadius, 1.0);
    double f = wrap01(f0);
    double best = dual_poly_value(Q, r, f);
    double hr_cur = hr, hf_cur = hf;
    for (int sweep = 0; sweep < 200; ++sweep) {
        const double r_prev = r, f_prev = f;
        auto [fn, vf] = golden_max([&](double x) { return dual_poly_value(Q, r, x); }, f - hf_cur,
                                   f + hf_cur, tol);
        if (vf > best) {
            best = vf;
            f = wrap01(fn);
        }
        const double lo = std::max(r - hr_cur, kMinRadius), hi = std::min(r + hr_cur, 1.0);
        if (hi > lo) {
            auto [rn, vr] = golden_max([&](double x) { return dual_poly_value(Q, x, f); }, lo, hi, tol);
            // The upper edge r = 1 is a common maximizer; test it explicitly.
            const double v1 = hi == 1.0 ? dual_poly_value(Q, 1.0, f) : -1.0;
            if (v1 > vr) {
                rn = 1.0;
                vr = v1;
            }
            if (vr > best) {
                best = vr;
                r = rn;
            }
        }
        const double dr = std::abs(r - r_prev), df = wrap_distance(f, f_prev);
        if (std::max(dr, df) <= tol) break;
        hf_cur = std::min(hf, std::max(4.0 * df, 10.0 * tol));
        hr_cur = std::min(hr, std::max(4.0 * dr, 10.0 * tol));
    }
    return {r, f, best};
}

Peak refine_peak_f(const ComplexMatrix& Q, double f0, double hf, double tol) {
    double f = wrap01(f0);
    double best = dual_poly_value(Q, 1.0, f);
    auto [fn, v] = golden_max([&](double x) { return dual_poly_value(Q, 1.0, x); }, f - hf, f + hf, tol);
    if (v > best) {
        best = v;
        f = wrap01(fn);
    }
    return {1.0, f, best};
}

PeakSet locate_peaks(const ComplexMatrix& Q, const RealMatrix& values, const RFGrid& grid,
                     const PeakOptions& opts) {
    if (!(opts.accept_threshold > 0.0 && opts.accept_threshold <= 1.0)) {
        throw ParameterError("threshold must lie in (0,1]");
    }
    if (values.rows() != static_cast<Index>(grid.r_size()) ||
        values.cols() != static_cast<Index>(grid.f_size())) {
        throw DimensionError("value matrix does not match the grid");
    }
    const double hr = step_or(grid.dr(), 1e-3), hf = step_or(grid.df(), 1e-3);
    std::vector<Peak> kept;
    for (const auto& c : grid_candidates(values, grid.f_periodic(), opts.candidate_floor)) {
        const Peak p = refine_peak(Q, grid.r_values()[static_cast<std::size_t>(c.r_index)],
                                   grid.f_values()[static_cast<std::size_t>(c.f_index)], hr, hf,
                                   opts.refine_tol);
        if (p.value < opts.accept_threshold) continue;
        const bool dup = std::any_of(kept.begin(), kept.end(),
                                     [&](const Peak& q) { return same_point(p, q, opts.merge_distance); });
        if (!dup) kept.push_back(p);
    }
    PeakSet out;
    out.peaks = std::move(kept);
    sort_peaks(out.peaks);
    if (opts.expected_K) out.count_mismatch = out.peaks.size() != *opts.expected_K;
    return out;
}

PeakSet top_k_peaks(const ComplexMatrix& Q, const RealMatrix& values, const RFGrid& grid,
                    std::size_t K, double refine_tol) {
    const double hr = step_or(grid.dr(), 1e-3), hf = step_or(grid.df(), 1e-3);
    PeakSet out;
    for (const auto& c : grid_candidates(values, grid.f_periodic(), 0.0)) {
        if (out.peaks.size() == K) break;
        const Peak p = refine_peak(Q, grid.r_values()[static_cast<std::size_t>(c.r_index)],
                                   grid.f_values()[static_cast<std::size_t>(c.f_index)], hr, hf,
                                   refine_tol);
        const bool dup = std::any_of(out.peaks.begin(), out.peaks.end(),
                                     [&](const Peak& q) { return same_point(p, q, 1e-8); });
        if (!dup) out.peaks.push_back(p);
    }
    out.count_mismatch = out.peaks.size() != K;
    sort_peaks(out.peaks);
    return out;
}

PeakSet top_k_peaks_f(const ComplexMatrix& Q, const RealVector& values,
                      std::span<const double> f_grid, bool periodic, std::size_t K,
                      double refine_tol) {
    if (static_cast<std::size_t>(values.size()) != f_grid.size()) {
        throw DimensionError("value vector does not match the grid");
    }
    const RealMatrix row = values.transpose();
    const double hf = f_grid.size() > 1 ? f_grid[1] - f_grid[0] : 1e-3;
    PeakSet out;
    for (const auto& c : grid_candidates(row, periodic, 0.0)) {
        if (out.peaks.size() == K) break;
        const Peak p = refine_peak_f(Q, f_grid[static_cast<std::size_t>(c.f_index)], hf, refine_tol);
        const bool dup = std::any_of(out.peaks.begin(), out.peaks.end(),
                                     [&](const Peak& q) { return same_point(p, q, 1e-8); });
        if (!dup) out.peaks.push_back(p);
    }
    out.count_mismatch = out.peaks.size() != K;
    sort_peaks(out.peaks);
    return out;
}

double off_support_max(const RealMatrix& values, const RFGrid& grid, const SpectralParams& support) {
    if (values.rows() != static_cast<Index>(grid.r_size()) || values.cols() != static_cast<Index>(grid.f_size()))
        throw DimensionError("value matrix does not match the grid");
    const auto& rs = grid.r_values();
    const auto& fs = grid.f_values();
    std::vector<unsigned char> skip(static_cast<std::size_t>(values.size()), 0);
    for (const auto& m : support) {
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 1; i < rs.size(); ++i)
            if (std::abs(rs[i] - m.r) < std::abs(rs[bi] - m.r)) bi = i;
        for (std::size_t j = 1; j < fs.size(); ++j)
            if (wrap_distance(fs[j], m.f) < wrap_distance(fs[bj], m.f)) bj = j;
        skip[bj * rs.size() + bi] = 1;
    }
    double best = 0.0;
    for (Index j = 0; j < values.cols(); ++j)
        for (Index i = 0; i < values.rows(); ++i)
            if (!skip[static_cast<std::size_t>(j * values.rows() + i)]) best = std::max(best, values(i, j));
    return best;
}

PeakSet false_peak_filter(const PeakSet& candidates, const ComplexMatrix& observed,
                          const SampleMask& mask) {
    if (candidates.empty()) throw ParameterError("no candidate peaks to filter");
    if (mask.empty()) throw ParameterError("false-peak filter needs observed entries");
    require_same_shape(observed, mask);
    const Index M = observed.rows(), N = observed.cols();
    const auto K = static_cast<Index>(candidates.size());

    ComplexMatrix A(M, K);
    for (Index k = 0; k < K; ++k) {
        const auto& p = candidates.peaks[static_cast<std::size_t>(k)];
        A.col(k) = make_atom(p.r, p.f, M);
    }
    PeakSet out = candidates;
    const RealVector s = singular_values(A);
    if (K > M || s(s.size() - 1) <= 1e-10 * s(0)) {
        out.ill_conditioned = true;
        return out;
    }

    ComplexMatrix C = ComplexMatrix::Zero(K, N);
    std::vector<Index> rows;
    for (Index n = 0; n < N; ++n) {
        rows.clear();
        for (Index m = 0; m < M; ++m)
            if (mask.contains(m, n)) rows.push_back(m);
        if (rows.empty()) continue;
        const auto R = static_cast<Index>(rows.size());
        ComplexMatrix An(R, K);
        ComplexVector yn(R);
        for (Index i = 0; i < R; ++i) {
            An.row(i) = A.row(rows[static_cast<std::size_t>(i)]);
            yn(i) = observed(rows[static_cast<std::size_t>(i)], n);
        }
        C.col(n) = Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(An).solve(yn);
    }
    const RealVector norms = C.rowwise().norm();
    const double cutoff = 1e-6 * norms.maxCoeff();
    out.peaks.clear();
    for (Index k = 0; k < K; ++k) {
        if (norms(k) >= cutoff) out.peaks.push_back(candidates.peaks[static_cast<std::size_t>(k)]);
    }
    return out;
}

} // namespace dsk
