#pragma once

#include <cstddef>
#include <random>

#include "permrelax/matrix.hpp"

namespace permrelax {

using Rng = std::mt19937_64;

Permutation random_permutation(std::size_t n, Rng& rng);

/// Entries uniform on [lo, hi).
SquareMatrix random_uniform_matrix(std::size_t n, Rng& rng, double lo = 0.0, double hi = 1.0);

/// Entries |N(0, 1)|, strictly positive.
SquareMatrix random_positive_matrix(std::size_t n, Rng& rng);

/// Random convex combination of `terms` random permutation matrices.
SquareMatrix random_doubly_stochastic(std::size_t n, Rng& rng, std::size_t terms = 4);

}  // namespace permrelax
