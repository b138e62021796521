#include "dsk/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dsk {

SpectralParams::SpectralParams(std::vector<Mode> modes) : modes_(std::move(modes)) {
    for (const auto& m : modes_) {
        if (!(m.f >= 0.0 && m.f < 1.0)) {
            std::ostringstream os;
            os << "frequency " << m.f << " outside [0,1)";
            throw ParameterError(os.str());
        }
        if (!(m.r > 0.0 && m.r <= 1.0)) {
            std::ostringstream os;
            os << "damping ratio " << m.r << " outside (0,1]";
            throw ParameterError(os.str());
        }
        if (m.c && (*m.c == cplx{0.0, 0.0} || !std::isfinite(m.c->real()) ||
                    !std::isfinite(m.c->imag()))) {
            throw ParameterError("amplitudes must be finite and nonzero");
        }
    }
    std::sort(modes_.begin(), modes_.end(), [](const Mode& a, const Mode& b) {
        return a.f != b.f ? a.f < b.f : a.r < b.r;
    });
    for (std::size_t k = 1; k < modes_.size(); ++k) {
        if (modes_[k].f == modes_[k - 1].f && modes_[k].r == modes_[k - 1].r) {
            throw ParameterError("(r,f) pairs must be pairwise distinct");
        }
    }
}

SpectralParams SpectralParams::from_lists(const std::vector<double>& r,
                                          const std::vector<double>& f,
                                          const std::vector<cplx>& c) {
    if (r.size() != f.size() || (!c.empty() && c.size() != r.size())) {
        throw DimensionError("damping, frequency and amplitude lists differ in length");
    }
    std::vector<Mode> modes;
    modes.reserve(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        Mode m{r[k], f[k], std::nullopt};
        if (!c.empty()) m.c = c[k];
        modes.push_back(m);
    }
    return SpectralParams(std::move(modes));
}

bool SpectralParams::has_amplitudes() const noexcept {
    return !modes_.empty() &&
           std::all_of(modes_.begin(), modes_.end(), [](const Mode& m) { return m.c.has_value(); });
}

std::vector<double> SpectralParams::dampings() const {
    std::vector<double> out;
    out.reserve(modes_.size());
    for (const auto& m : modes_) out.push_back(m.r);
    return out;
}

std::vector<double> SpectralParams::frequencies() const {
    std::vector<double> out;
    out.reserve(modes_.size());
    for (const auto& m : modes_) out.push_back(m.f);
    return out;
}

double wrap_distance(double f1, double f2) noexcept {
    double d = std::fmod(std::abs(f1 - f2), 1.0);
    return std::min(d, 1.0 - d);
}

double min_separation(const SpectralParams& params) {
    if (params.size() < 2) return 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < params.size(); ++k) {
        for (std::size_t l = k + 1; l < params.size(); ++l) {
            best = std::min(best, wrap_distance(params[k].f, params[l].f));
        }
    }
    return best;
}

ModeMatrix::ModeMatrix(ComplexMatrix phi) : phi_(std::move(phi)) {
    if (phi_.rows() == 0 || phi_.cols() == 0) {
        throw DimensionError("mode matrix must be nonempty");
    }
    for (Index k = 0; k < phi_.cols(); ++k) {
        if (std::abs(phi_.col(k).norm() - 1.0) > 1e-10) {
            throw ParameterError("mode matrix columns must have unit norm");
        }
    }
}

ModeMatrix ModeMatrix::normalized(ComplexMatrix raw) {
    for (Index k = 0; k < raw.cols(); ++k) {
        const double n = raw.col(k).norm();
        if (!(n > 0.0)) throw ParameterError("mode matrix has a zero column");
        raw.col(k) /= n;
    }
    return ModeMatrix(std::move(raw));
}

SampleMask::SampleMask(Index m, Index n, std::vector<std::pair<Index, Index>> indices)
    : m_(m), n_(n), indices_(std::move(indices)) {
    if (m <= 0 || n <= 0) throw DimensionError("mask dimensions must be positive");
    flags_.assign(static_cast<std::size_t>(m * n), 0);
    for (const auto& [i, j] : indices_) {
        if (i < 0 || i >= m || j < 0 || j >= n) {
            throw DimensionError("mask index out of range");
        }
        auto& flag = flags_[static_cast<std::size_t>(j * m + i)];
        if (flag) throw ParameterError("duplicate mask index");
        flag = 1;
    }
    std::sort(indices_.begin(), indices_.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
}

SampleMask SampleMask::full(Index m, Index n) {
    std::vector<std::pair<Index, Index>> idx;
    idx.reserve(static_cast<std::size_t>(m * n));
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) idx.emplace_back(i, j);
    return SampleMask(m, n, std::move(idx));
}

ComplexMatrix SampleMask::project(const ComplexMatrix& X) const {
    require_same_shape(X, *this);
    ComplexMatrix out = ComplexMatrix::Zero(m_, n_);
    for (const auto& [i, j] : indices_) out(i, j) = X(i, j);
    return out;
}

void require_same_shape(const ComplexMatrix& X, const SampleMask& mask) {
    if (X.rows() != mask.rows() || X.cols() != mask.cols()) {
        throw DimensionError("mask shape does not match matrix shape");
    }
}

void require_finite(const ComplexMatrix& X, const char* what) {
    if (!X.allFinite()) throw ParameterError(std::string(what) + " has non-finite entries");
}

} // namespace dsk
