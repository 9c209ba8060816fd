#pragma once

#include <cstddef>

#include "permrelax/matrix.hpp"

namespace permrelax {

struct ProjectionConfig {
    /// Column+row sweeps per optimizer step.
    std::size_t ras_passes = 1;
    /// Target max |row/col sum - 1| for iterate_to_tolerance.
    double epsilon = 1e-8;
    std::size_t max_iters = 10000;

    void validate() const;
};

struct ScalingResult {
    SquareMatrix matrix;
    std::size_t iterations = 0;
};

/// iterate_to_tolerance exhausted max_iters; carries the last iterate.
class NoConvergence : public Error {
public:
    NoConvergence(SquareMatrix best, std::size_t iterations, double violation);
    SquareMatrix best;
    std::size_t iterations;
    double violation;
};

/// Entrywise max(m_ij, 0).
SquareMatrix threshold_nonnegative(SquareMatrix m);

/// One RAS sweep: divide each column by its sum, then each row by its sum.
/// Rows of the result sum to 1; columns only approximately.
/// Throws ZeroSum if a column or row sums to zero (or is not finite).
SquareMatrix ras_pass(SquareMatrix m);

/// Sinkhorn iteration until max |row/col sum - 1| <= cfg.epsilon.
/// Returns after zero sweeps when the input is already within tolerance.
ScalingResult iterate_to_tolerance(SquareMatrix m, const ProjectionConfig& cfg = {});

}  // namespace permrelax
