#include "dsk/grid.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace dsk {

namespace {

double spacing(const std::vector<double>& v) {
    return v.size() < 2 ? 0.0 : (v.back() - v.front()) / static_cast<double>(v.size() - 1);
}

void require_increasing(const std::vector<double>& v, const char* axis) {
    if (v.empty()) throw ParameterError(std::string(axis) + " axis is empty");
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            throw ParameterError(std::string(axis) + " axis must be strictly increasing");
        }
    }
}

} // namespace

RFGrid::RFGrid(std::vector<double> r_values, std::vector<double> f_values)
    : r_(std::move(r_values)), f_(std::move(f_values)) {
    require_increasing(r_, "r");
    require_increasing(f_, "f");
    if (!(r_.front() > 0.0 && r_.back() <= 1.0)) throw ParameterError("r axis must lie in (0,1]");
    if (!(f_.front() >= 0.0 && f_.back() < 1.0)) throw ParameterError("f axis must lie in [0,1)");
    dr_ = spacing(r_);
    df_ = spacing(f_);
    if (f_.size() > 2 && f_.front() == 0.0) {
        const double F = static_cast<double>(f_.size());
        periodic_ = true;
        for (std::size_t j = 0; j < f_.size(); ++j) {
            if (std::abs(f_[j] - static_cast<double>(j) / F) > 1e-12) {
                periodic_ = false;
                break;
            }
        }
        if (periodic_) df_ = 1.0 / F;
    }
}

RFGrid RFGrid::uniform(double r_min, double r_max, double dr, Index f_count) {
    if (!(dr > 0.0) || !(r_max >= r_min)) throw ParameterError("invalid damping range");
    if (f_count < 1) throw ParameterError("frequency grid needs at least one point");
    std::vector<double> r;
    const auto steps = static_cast<long>(std::floor((r_max - r_min) / dr + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        double v = r_min + static_cast<double>(i) * dr;
        if (std::abs(v - r_max) < 1e-9 * dr) v = r_max;
        r.push_back(v);
    }
    if (r_max - r.back() > 1e-9 * dr) r.push_back(r_max);
    std::vector<double> f(static_cast<std::size_t>(f_count));
    for (Index j = 0; j < f_count; ++j) f[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(f_count);
    return RFGrid(std::move(r), std::move(f));
}

RFGrid RFGrid::standard(Index M) { return uniform(0.75, 1.0, 0.002, 8 * M); }

std::vector<double> parse_range(std::string_view spec) {
    double parts[3];
    std::size_t n = 0;
    std::size_t pos = 0;
    while (n < 3) {
        const auto next = spec.find(':', pos);
        const auto token = spec.substr(pos, next == std::string_view::npos ? spec.size() - pos : next - pos);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            throw ParameterError("malformed range '" + std::string(spec) + "'");
        }
        parts[n++] = value;
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    if (n != 3 || spec.find(':', pos) != std::string_view::npos) {
        throw ParameterError("range must have the form start:step:end");
    }
    const double start = parts[0], step = parts[1], end = parts[2];
    if (!(step > 0.0) || end < start) throw ParameterError("range needs step > 0 and end >= start");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((end - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        double v = start + static_cast<double>(i) * step;
        if (std::abs(v - end) < 1e-9 * step) v = end;
        out.push_back(v);
    }
    return out;
}

} // namespace dsk
