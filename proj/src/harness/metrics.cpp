#include "dsk/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsk::harness {

std::vector<std::size_t> hungarian(const RealMatrix& cost) {
    const auto n = static_cast<std::size_t>(cost.rows());
    if (cost.cols() != cost.rows()) throw DimensionError("assignment needs a square cost matrix");
    // Shortest augmenting path with potentials; 1-based with a dummy column 0.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(static_cast<Index>(i0 - 1), static_cast<Index>(j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assign(n);
    for (std::size_t j = 1; j <= n; ++j) assign[p[j] - 1] = j - 1;
    return assign;
}

MatchResult success_params(const SpectralParams& est, const SpectralParams& truth, double tol,
                           bool frequencies_only) {
    MatchResult m;
    if (est.size() != truth.size()) {
        m.reason = "count mismatch: " + std::to_string(est.size()) + " estimated, " +
                   std::to_string(truth.size()) + " true";
        m.max_r_error = m.max_f_error = std::numeric_limits<double>::infinity();
        return m;
    }
    const auto K = static_cast<Index>(truth.size());
    if (K == 0) {
        m.success = true;
        return m;
    }
    RealMatrix cost(K, K);
    for (Index i = 0; i < K; ++i) {
        for (Index j = 0; j < K; ++j) {
            const auto& a = est[static_cast<std::size_t>(i)];
            const auto& b = truth[static_cast<std::size_t>(j)];
            const double df = wrap_distance(a.f, b.f);
            const double dr = frequencies_only ? 0.0 : a.r - b.r;
            cost(i, j) = std::sqrt(df * df + dr * dr);
        }
    }
    const auto assign = hungarian(cost);
    for (Index i = 0; i < K; ++i) {
        const auto& a = est[static_cast<std::size_t>(i)];
        const auto& b = truth[assign[static_cast<std::size_t>(i)]];
        m.max_f_error = std::max(m.max_f_error, wrap_distance(a.f, b.f));
        if (!frequencies_only) m.max_r_error = std::max(m.max_r_error, std::abs(a.r - b.r));
    }
    m.success = m.max_r_error <= tol && m.max_f_error <= tol;
    if (!m.success) m.reason = "deviation above tolerance";
    return m;
}

double rel_err(const ComplexMatrix& Xhat, const ComplexMatrix& Xstar) {
    if (Xhat.rows() != Xstar.rows() || Xhat.cols() != Xstar.cols()) {
        throw DimensionError("matrices differ in shape");
    }
    const double denom = Xstar.norm();
    if (denom == 0.0) throw ParameterError("relative error against a zero matrix");
    return (Xhat - Xstar).norm() / denom;
}

Interval wilson_interval(std::size_t successes, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    if (successes > n) throw ParameterError("more successes than trials");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

} // namespace dsk::harness
