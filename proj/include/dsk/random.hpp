#pragma once

#include <cstdint>
#include <random>

#include "dsk/core.hpp"

namespace dsk {

using Rng = std::mt19937_64;

/// Mixes a master seed with stream coordinates (e.g. trial index and stage)
/// into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
cplx complex_normal(Rng& rng, double variance = 1.0);

} // namespace dsk
