#pragma once

#include <string_view>
#include <vector>

#include "dsk/core.hpp"

namespace dsk {

/// Rectangular evaluation grid over the damping-frequency plane.
///
/// Both axes are nonempty and strictly increasing; r values lie in (0,1],
/// f values in [0,1). `dr`/`df` record the nominal spacing (0 for a single
/// point).
class RFGrid {
public:
    RFGrid(std::vector<double> r_values, std::vector<double> f_values);

    /// r in [r_min, r_max] with spacing dr, f = j / f_count for j < f_count.
    static RFGrid uniform(double r_min, double r_max, double dr, Index f_count);

    /// Default grid for length-M atoms: f spacing 1/(8M), r in [0.75, 1] by 0.002.
    static RFGrid standard(Index M);

    [[nodiscard]] const std::vector<double>& r_values() const noexcept { return r_; }
    [[nodiscard]] const std::vector<double>& f_values() const noexcept { return f_; }
    [[nodiscard]] std::size_t r_size() const noexcept { return r_.size(); }
    [[nodiscard]] std::size_t f_size() const noexcept { return f_.size(); }
    [[nodiscard]] double dr() const noexcept { return dr_; }
    [[nodiscard]] double df() const noexcept { return df_; }
    /// True when the f axis is the uniform full-circle grid j/F, so that the
    /// first and last columns are neighbours.
    [[nodiscard]] bool f_periodic() const noexcept { return periodic_; }

private:
    std::vector<double> r_;
    std::vector<double> f_;
    double dr_ = 0.0;
    double df_ = 0.0;
    bool periodic_ = false;
};

/// Parses "start:step:end" as the inclusive arithmetic range (a trailing
/// point within 1e-9*step of `end` is kept).
std::vector<double> parse_range(std::string_view spec);

} // namespace dsk
