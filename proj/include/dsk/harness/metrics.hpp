#pragma once

#include <string>
#include <vector>

#include "dsk/core.hpp"

namespace dsk::harness {

inline constexpr double kParamTolerance = 1e-5;
inline constexpr double kDataTolerance = 1e-5;

/// Minimum-cost assignment for a square cost matrix; result[i] is the column
/// assigned to row i.
std::vector<std::size_t> hungarian(const RealMatrix& cost);

struct MatchResult {
    bool success = false;
    double max_r_error = 0.0;
    double max_f_error = 0.0;
    /// Empty on success; otherwise why the match failed.
    std::string reason;
};

/// Pairs estimates with the truth by optimal assignment on the distance
/// sqrt(wrap(df)^2 + dr^2) and tests both maximum deviations against `tol`.
/// When `frequencies_only` is set, damping is ignored in matching and test.
MatchResult success_params(const SpectralParams& est, const SpectralParams& truth,
                           double tol = kParamTolerance, bool frequencies_only = false);

/// ||Xhat - Xstar||_F / ||Xstar||_F.
double rel_err(const ComplexMatrix& Xhat, const ComplexMatrix& Xstar);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// 95% Wilson score interval for `successes` out of `n`.
Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

} // namespace dsk::harness
