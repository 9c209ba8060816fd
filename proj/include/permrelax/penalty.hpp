#pragma once

#include "permrelax/matrix.hpp"

namespace permrelax {

/// Weight and numerical guard for the matrix l1-l2 penalty.
struct PenaltyConfig {
    double lambda = 0.0;
    /// l2 row/column norms below this contribute nothing to the gradient.
    double norm_guard = 1e-12;

    /// Throws DomainError when lambda < 0 or norm_guard is outside (0, 1e-6].
    void validate() const;
};

/// Sum over rows and columns of (l1 norm - l2 norm).
///
/// Zero exactly on permutation matrices among doubly stochastic matrices and
/// positive otherwise; nonnegative for every real matrix by Cauchy-Schwarz.
/// The l1 sums are evaluated in full (not replaced by the constant 2n) since
/// the constraints hold only approximately while optimizing.
double penalty_value(const SquareMatrix& m);

/// Subgradient of penalty_value:
///   G(i,j) = 2 sign(m_ij) - m_ij / ||row_i||_2 - m_ij / ||col_j||_2
/// with sign(0) = 0. A norm below cfg.norm_guard drops its term.
/// cfg.lambda is not applied here.
SquareMatrix penalty_subgradient(const SquareMatrix& m, const PenaltyConfig& cfg = {});

}  // namespace permrelax
