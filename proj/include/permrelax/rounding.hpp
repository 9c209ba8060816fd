#pragma once

#include "permrelax/matrix.hpp"

namespace permrelax {

/// Permutation maximizing sum_i m(i, p[i]), i.e. the permutation matrix
/// nearest to m in Frobenius norm. Exact O(n^3) Hungarian solve.
///
/// Among optimal permutations the lexicographically smallest index map is
/// returned, so ties resolve towards low column indices and repeated calls
/// agree bit for bit.
Permutation nearest_permutation_lap(const SquareMatrix& m);

/// Row-wise argmax (lowest column on ties). Throws Collision when two rows
/// select the same column; callers fall back to nearest_permutation_lap.
Permutation round_argmax(const SquareMatrix& m);

/// sum_i m(i, p[i])
double assignment_score(const SquareMatrix& m, const Permutation& p);

}  // namespace permrelax
