#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "permrelax/matrix.hpp"
#include "permrelax/optimizer.hpp"

namespace permrelax {

enum class QapKind {
    /// minimize ||A Q - Q B||_F^2
    graph_matching,
    /// minimize trace(A Q B^T Q^T)
    general_qap,
};

struct QapInstance {
    SquareMatrix a;
    SquareMatrix b;
    QapKind kind = QapKind::graph_matching;

    QapInstance() = default;
    /// Throws DimensionMismatch when a and b differ in size.
    QapInstance(SquareMatrix a, SquareMatrix b, QapKind kind = QapKind::graph_matching);

    std::size_t n() const noexcept { return a.n(); }
};

/// ||A Q - Q B||_F^2
double gm_objective(const QapInstance& inst, const SquareMatrix& q);
/// 2 (A^T R - R B^T) with R = A Q - Q B
SquareMatrix gm_gradient(const QapInstance& inst, const SquareMatrix& q);

/// trace(A Q B^T Q^T). For a permutation Q,
///   gm_objective = ||A||_F^2 + ||B||_F^2 - 2 qap_trace_objective,
/// i.e. graph matching is the trace form with A replaced by -A.
double qap_trace_objective(const QapInstance& inst, const SquareMatrix& q);
/// A^T Q B + A Q B^T
SquareMatrix qap_trace_gradient(const QapInstance& inst, const SquareMatrix& q);

/// Objective selected by inst.kind.
double qap_objective(const QapInstance& inst, const SquareMatrix& q);
double qap_objective(const QapInstance& inst, const Permutation& p);

/// The instance as a single-matrix ObjectiveProblem.
class QapProblem final : public ObjectiveProblem {
public:
    explicit QapProblem(QapInstance inst) : inst_(std::move(inst)) {}

    std::vector<std::size_t> dimensions() const override { return {inst_.n()}; }
    double loss(std::span<const double> weights,
                std::span<const SquareMatrix> matrices) const override;
    Gradient loss_gradient(std::span<const double> weights,
                           std::span<const SquareMatrix> matrices) const override;

    const QapInstance& instance() const noexcept { return inst_; }

private:
    QapInstance inst_;
};

/// Largest singular value by power iteration on M^T M.
double spectral_norm(const SquareMatrix& m);

/// Step size 1 / (Lipschitz bound of the objective gradient), tangent mode,
/// 3000 linearly decaying iterations.
OptimizerConfig default_qap_config(const QapInstance& inst);

/// 0.1 * (||A||_2^2 + ||B||_2^2): the scale of the quadratic objective.
double default_qap_lambda(const QapInstance& inst);

struct RelaxedSolution {
    SquareMatrix matrix;
    double objective = 0.0;
    std::uint64_t seed = 0;
};

/// Best of `restarts` optimizer runs with lambda = 0 (seeds cfg.seed, cfg.seed+1, ...).
/// Only defined for graph matching, where the relaxation is convex.
RelaxedSolution solve_convex_relaxed(const QapInstance& inst, const OptimizerConfig& cfg,
                                     std::size_t restarts = 8);

/// First-improvement descent over pairwise swaps of the assignment; stops
/// at a permutation no single swap improves.
Permutation swap_descent(const QapInstance& inst, Permutation p);

enum class Polish { none, swap_descent };

struct PenalizedSolution {
    Permutation permutation;
    double objective = 0.0;
    /// objective of the LAP-rounded permutation of the same restart before polishing
    double rounded_objective = 0.0;
    SquareMatrix relaxed;
    double penalty = 0.0;
    std::uint64_t seed = 0;
};

/// Best of `restarts` penalized runs, ranked by the objective after LAP
/// rounding and, with Polish::swap_descent, after descending from it.
PenalizedSolution solve_penalized(const QapInstance& inst, double lambda,
                                  const OptimizerConfig& cfg, std::size_t restarts = 8,
                                  Polish polish = Polish::swap_descent);

inline constexpr std::size_t kBruteForceLimit = 10;

struct OracleSolution {
    Permutation permutation;
    double objective = 0.0;
};

/// Exhaustive minimum of qap_objective over all permutations; the
/// lexicographically smallest minimizer wins ties. TooLarge when n > 10.
OracleSolution brute_force_oracle(const QapInstance& inst);

namespace serial {
OracleSolution brute_force_oracle(const QapInstance& inst);
}

/// Text format: dimension line, n rows of A, a blank line, n rows of B.
QapInstance read_qap_instance(std::istream& in, QapKind kind = QapKind::graph_matching);
void write_qap_instance(std::ostream& out, const QapInstance& inst);

}  // namespace permrelax
