#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permrelax/matrix.hpp"

namespace permrelax {

struct Gradient {
    std::vector<double> weights;
    std::vector<SquareMatrix> matrices;
};

/// Differentiable loss L(w, M_1..M_J) over auxiliary weights and J relaxed
/// permutations. The penalty is added by the optimizer, not the problem.
class ObjectiveProblem {
public:
    virtual ~ObjectiveProblem() = default;

    /// Sizes of the matrix variables M_j.
    virtual std::vector<std::size_t> dimensions() const = 0;
    virtual std::size_t weight_dimension() const { return 0; }

    virtual double loss(std::span<const double> weights,
                        std::span<const SquareMatrix> matrices) const = 0;
    virtual Gradient loss_gradient(std::span<const double> weights,
                                   std::span<const SquareMatrix> matrices) const = 0;

    /// Gradient used at optimizer iteration t. Stochastic problems override
    /// this to sample a mini-batch; the default is the full-batch gradient.
    virtual Gradient iteration_gradient(std::size_t iteration, std::span<const double> weights,
                                        std::span<const SquareMatrix> matrices) const {
        (void)iteration;
        return loss_gradient(weights, matrices);
    }
};

enum class GradientMode {
    /// Gradient step exactly as written, then threshold and RAS.
    raw,
    /// Remove the row/column-mean component of each matrix gradient first,
    /// so interior steps keep row and column sums unchanged.
    tangent,
};

enum class LearningRateSchedule { linear_decay, constant };

struct OptimizerConfig {
    double lambda = 0.0;
    double learning_rate = 0.1;
    LearningRateSchedule schedule = LearningRateSchedule::linear_decay;
    std::size_t total_iterations = 1000;
    std::uint64_t seed = 0;
    std::size_t ras_passes_per_step = 1;
    /// Trace stride; 0 records only the first and last iterate.
    std::size_t record_every = 0;
    double momentum = 0.0;
    GradientMode gradient_mode = GradientMode::raw;
    double norm_guard = 1e-12;

    /// eta_t = eta_0 (1 - t / Tn) under linear decay.
    double learning_rate_at(std::size_t iteration) const;
    void validate() const;
};

struct TraceRecord {
    std::size_t iteration = 0;
    double loss = 0.0;
    /// Sum of penalty_value over all matrices.
    double penalty = 0.0;
    double constraint_violation = 0.0;
    /// loss at the LAP-rounded permutations minus loss at the relaxed matrices.
    double rounding_gap = 0.0;
    /// Whether round_argmax succeeds and agrees with the LAP rounding for every matrix.
    bool argmax_agrees = false;
};

struct OptimizerState {
    std::size_t iteration = 0;
    std::vector<double> weights;
    std::vector<SquareMatrix> matrices;
    std::vector<double> weight_velocity;
    std::vector<SquareMatrix> matrix_velocity;
};

struct OptimizationResult {
    std::vector<double> final_weights;
    std::vector<SquareMatrix> relaxed_matrices;
    std::vector<Permutation> rounded;
    std::vector<TraceRecord> trace;
    double final_loss = 0.0;
    double final_penalty = 0.0;
    double rounded_loss = 0.0;
    double rounding_gap = 0.0;
};

/// A run aborted by a degenerate iterate; keeps the trace up to the failure.
class RunFailure : public Error {
public:
    RunFailure(const std::string& cause, std::size_t iteration, std::vector<TraceRecord> trace);
    std::size_t iteration;
    std::vector<TraceRecord> trace;
};

/// Weights ~ N(0, 1); each M_j ~ |N(0, 1)| entrywise followed by one ras_pass.
OptimizerState initialize(const ObjectiveProblem& problem, const OptimizerConfig& cfg);

/// One iteration: gradient of L + lambda * sum P(M_j), weight and matrix
/// updates, thresholding, then ras_passes_per_step RAS sweeps.
/// Throws ZeroSum when a sweep meets an empty row or column.
OptimizerState step(const ObjectiveProblem& problem, OptimizerState state,
                    const OptimizerConfig& cfg);

TraceRecord record(const ObjectiveProblem& problem, const OptimizerState& state);

/// Runs total_iterations steps and rounds each matrix with nearest_permutation_lap.
/// Throws RunFailure on a degenerate iterate.
OptimizationResult run(const ObjectiveProblem& problem, const OptimizerConfig& cfg);

/// Outcome of one restart in run_restarts.
struct RestartOutcome {
    std::uint64_t seed = 0;
    std::optional<OptimizationResult> result;
    std::string failure;
};

/// Independent runs, one per seed, executed in parallel. Outcomes are
/// returned in seed order regardless of scheduling.
std::vector<RestartOutcome> run_restarts(const ObjectiveProblem& problem,
                                         const OptimizerConfig& cfg,
                                         std::span<const std::uint64_t> seeds);

/// Index of the successful restart with the smallest rounded loss (first on ties).
std::optional<std::size_t> best_restart(std::span<const RestartOutcome> outcomes);

double loss_at(const ObjectiveProblem& problem, std::span<const double> weights,
               std::span<const Permutation> permutations);

struct GradientCheck {
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
};

/// Compares loss_gradient with central finite differences of loss.
/// Relative error is |analytic - numeric| / max(1, |numeric|).
GradientCheck check_gradient(const ObjectiveProblem& problem, std::span<const double> weights,
                             std::span<const SquareMatrix> matrices, double step = 1e-6);

/// CSV with header: iteration,loss,penalty,constraint_violation,rounding_gap,argmax_agrees
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);

}  // namespace permrelax
