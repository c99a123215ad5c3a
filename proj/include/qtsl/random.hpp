#pragma once

#include <cstdint>
#include <random>

#include "qtsl/qcore.hpp"

namespace qtsl {

using Rng = std::mt19937_64;

/// SplitMix64 output function applied to one 64-bit word.
std::uint64_t splitmix64(std::uint64_t value);

/// Per-trial seed: SplitMix64 of seed XOR index. Reproducible regardless of
/// how trials are spread over workers.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);
Rng make_rng(std::uint64_t seed, std::uint64_t index = 0);

std::size_t uniform_index(Rng& rng, std::size_t n);
double uniform_real(Rng& rng);

/// Haar-ish random unitary via QR of a complex Gaussian matrix.
Eigen::MatrixXcd random_unitary(std::size_t n, Rng& rng);
/// Dense random state over the whole layout.
PureState random_state(const RegisterLayout& layout, Rng& rng);

}  // namespace qtsl
