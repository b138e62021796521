#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dsk {

using cplx = std::complex<double>;
using Index = Eigen::Index;

/// Dense complex matrix; carrier for data matrices, Hankel matrices,
/// subspace bases and dual certificates.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class ParameterError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// An estimator could not produce a result from its input (e.g. a rank
/// deficient shift-invariance system).
class EstimationError : public Error {
public:
    using Error::Error;
};

class RankMismatchError : public Error {
public:
    using Error::Error;
};

/// One damped exponential component r^t e^{j2 pi f t} with optional amplitude.
struct Mode {
    double r = 1.0;
    double f = 0.0;
    std::optional<cplx> c;
};

/// Set of (r, f, c) triples describing a damped spectrally sparse signal.
///
/// Entries are validated on construction (f in [0,1), r in (0,1], c != 0 when
/// present, pairwise distinct (r,f)) and kept sorted by f then r so that two
/// parameter sets compare canonically.
class SpectralParams {
public:
    SpectralParams() = default;
    explicit SpectralParams(std::vector<Mode> modes);

    /// Builds from parallel lists; `c` may be empty (amplitudes unset).
    static SpectralParams from_lists(const std::vector<double>& r,
                                     const std::vector<double>& f,
                                     const std::vector<cplx>& c = {});

    [[nodiscard]] std::size_t size() const noexcept { return modes_.size(); }
    [[nodiscard]] bool empty() const noexcept { return modes_.empty(); }
    [[nodiscard]] const Mode& operator[](std::size_t k) const { return modes_[k]; }
    [[nodiscard]] const std::vector<Mode>& modes() const noexcept { return modes_; }
    [[nodiscard]] auto begin() const noexcept { return modes_.begin(); }
    [[nodiscard]] auto end() const noexcept { return modes_.end(); }

    [[nodiscard]] bool has_amplitudes() const noexcept;
    [[nodiscard]] std::vector<double> dampings() const;
    [[nodiscard]] std::vector<double> frequencies() const;

private:
    std::vector<Mode> modes_;
};

/// Distance between two frequencies on the unit circle, min(d, 1-d).
double wrap_distance(double f1, double f2) noexcept;

/// Minimum pairwise wrap-around frequency separation. Returns 1 for a single
/// mode, where the separation is otherwise undefined.
double min_separation(const SpectralParams& params);

/// N x K matrix of mode shapes; every column has unit Euclidean norm.
class ModeMatrix {
public:
    /// Takes ownership of `phi`; throws ParameterError unless every column is
    /// unit norm to 1e-10.
    explicit ModeMatrix(ComplexMatrix phi);

    /// Normalizes the columns of `raw` (zero columns are rejected).
    static ModeMatrix normalized(ComplexMatrix raw);

    [[nodiscard]] const ComplexMatrix& phi() const noexcept { return phi_; }
    [[nodiscard]] Index rows() const noexcept { return phi_.rows(); }
    [[nodiscard]] Index cols() const noexcept { return phi_.cols(); }

private:
    ComplexMatrix phi_;
};

/// Index set of observed entries of an m x n matrix.
///
/// Indices are unique and stored in column-major linear order; a dense flag
/// array backs O(1) membership tests.
class SampleMask {
public:
    SampleMask(Index m, Index n, std::vector<std::pair<Index, Index>> indices);

    static SampleMask full(Index m, Index n);

    [[nodiscard]] Index rows() const noexcept { return m_; }
    [[nodiscard]] Index cols() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
    [[nodiscard]] bool is_full() const noexcept {
        return indices_.size() == static_cast<std::size_t>(m_ * n_);
    }
    [[nodiscard]] bool contains(Index i, Index j) const {
        return flags_[static_cast<std::size_t>(j * m_ + i)] != 0;
    }
    [[nodiscard]] const std::vector<std::pair<Index, Index>>& indices() const noexcept {
        return indices_;
    }
    /// Column-major 0/1 flags, length m*n.
    [[nodiscard]] const std::vector<unsigned char>& flags() const noexcept { return flags_; }

    /// P_Omega(X): copy of X with unobserved entries set to zero.
    [[nodiscard]] ComplexMatrix project(const ComplexMatrix& X) const;

    friend bool operator==(const SampleMask& a, const SampleMask& b) {
        return a.m_ == b.m_ && a.n_ == b.n_ && a.indices_ == b.indices_;
    }

private:
    Index m_;
    Index n_;
    std::vector<std::pair<Index, Index>> indices_;
    std::vector<unsigned char> flags_;
};

/// Throws DimensionError when `mask` does not match the shape of `X`.
void require_same_shape(const ComplexMatrix& X, const SampleMask& mask);

/// Throws ParameterError when any entry is NaN or infinite.
void require_finite(const ComplexMatrix& X, const char* what);

} // namespace dsk
