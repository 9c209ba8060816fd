#include "permrelax/projection.hpp"

#include <cmath>

#include "permrelax/kernels.hpp"

namespace permrelax {

namespace {

void require_positive(const std::vector<double>& sums, Axis axis) {
    for (std::size_t k = 0; k < sums.size(); ++k) {
        if (!(sums[k] > 0.0) || !std::isfinite(sums[k])) {
            throw ZeroSum(axis, k);
        }
    }
}

}  // namespace

void ProjectionConfig::validate() const {
    if (ras_passes < 1) {
        throw DomainError("ras_passes must be at least 1");
    }
    if (!(epsilon > 0.0)) {
        throw DomainError("epsilon must be positive");
    }
    if (max_iters < 1) {
        throw DomainError("max_iters must be at least 1");
    }
}

NoConvergence::NoConvergence(SquareMatrix best_, std::size_t iterations_, double violation_)
    : Error("matrix scaling did not converge after " + std::to_string(iterations_) +
            " iterations (violation " + std::to_string(violation_) + ")"),
      best(std::move(best_)),
      iterations(iterations_),
      violation(violation_) {}

SquareMatrix threshold_nonnegative(SquareMatrix m) {
    for (double& v : m.values()) {
        if (v < 0.0) {
            v = 0.0;
        }
    }
    return m;
}

SquareMatrix ras_pass(SquareMatrix m) {
    const auto cols = kernels::column_sums(m);
    require_positive(cols, Axis::column);
    kernels::divide_columns(m, cols);
    const auto rows = kernels::row_sums(m);
    require_positive(rows, Axis::row);
    kernels::divide_rows(m, rows);
    return m;
}

ScalingResult iterate_to_tolerance(SquareMatrix m, const ProjectionConfig& cfg) {
    cfg.validate();
    double violation = constraint_violation(m);
    std::size_t iterations = 0;
    while (!(violation <= cfg.epsilon)) {
        if (iterations == cfg.max_iters) {
            throw NoConvergence(std::move(m), iterations, violation);
        }
        m = ras_pass(std::move(m));
        ++iterations;
        violation = constraint_violation(m);
    }
    return {std::move(m), iterations};
}

}  // namespace permrelax
