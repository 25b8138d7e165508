#pragma once

#include <cstdint>
#include <random>

#include "posext/matrix.hpp"

namespace posext {

using Rng = std::mt19937_64;

/// Default seed for every randomized entry point that is not given one.
inline constexpr std::uint64_t kDefaultSeed = 0;

/// Independent child seed for stream `stream` of `base` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

double standard_normal(Rng& rng);
double uniform(Rng& rng, double lo, double hi);

ComplexVector random_complex_vector(Index n, Rng& rng);
ComplexVector random_unit_vector(Index n, Rng& rng);
/// Ginibre matrix: i.i.d. complex Gaussian entries, E|z|^2 = 1.
ComplexMatrix random_ginibre(Index rows, Index cols, Rng& rng);
ComplexMatrix random_hermitian(Index n, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(Index n, Rng& rng);
RealVector random_real_vector(Index n, Rng& rng);

}  // namespace posext
