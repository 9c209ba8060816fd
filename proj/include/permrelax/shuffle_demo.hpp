#pragma once

// Synthetic permutation recovery: y = W2 P* W1 x (+ noise) with known teacher
// maps. Learning the shuffle M between the two maps reproduces the
// penalty-decay and rounding-gap behaviour of channel-shuffle training.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permrelax/matrix.hpp"
#include "permrelax/optimizer.hpp"

namespace permrelax {

struct ShuffleTaskSpec {
    std::size_t n = 16;
    std::size_t samples = 512;
    double noise_std = 0.0;
    /// Width of the input x; 0 means ceil(n / 2). Below n the relaxed
    /// problem has a whole face of minimizers and only the penalty singles
    /// out the permutation.
    std::size_t input_dim = 0;
};

struct ShuffleTask {
    std::size_t n = 0;
    std::size_t input_dim = 0;
    Matrix w1;         ///< n x input_dim
    SquareMatrix w2;   ///< n x n
    Permutation p_star;
    double noise_std = 0.0;
};

struct ShuffleDataset {
    Matrix inputs;   ///< samples x input_dim
    Matrix targets;  ///< samples x n
};

struct GeneratedTask {
    ShuffleTask task;
    ShuffleDataset data;
};

/// Unit-Gaussian teacher maps and inputs, uniformly random hidden permutation.
/// DomainError unless n >= 2 and samples >= 10 n.
GeneratedTask generate_task(const ShuffleTaskSpec& spec, std::uint64_t seed);

/// mean over the dataset of ||w2 M w1 x - y||^2, evaluated sample by sample.
double dataset_loss(const ShuffleTask& task, const ShuffleDataset& data, const SquareMatrix& m,
                    const Matrix& w2);

/// Mean squared error of the shuffle M with closed-form gradient, computed
/// from second-moment statistics of the dataset.
///
/// With learn_output_map the n*n entries of w2 become the optimizer's weight
/// vector (row-major) instead of being fixed to the teacher.
class ShuffleProblem final : public ObjectiveProblem {
public:
    ShuffleProblem(const ShuffleTask& task, const ShuffleDataset& data,
                   bool learn_output_map = false);

    std::vector<std::size_t> dimensions() const override { return {n_}; }
    std::size_t weight_dimension() const override { return learn_output_map_ ? n_ * n_ : 0; }

    double loss(std::span<const double> weights,
                std::span<const SquareMatrix> matrices) const override;
    Gradient loss_gradient(std::span<const double> weights,
                           std::span<const SquareMatrix> matrices) const override;

    /// Lipschitz bound of the matrix gradient with the teacher map fixed.
    double lipschitz() const noexcept { return lipschitz_; }
    /// mean ||y||^2
    double target_energy() const noexcept { return target_energy_; }

private:
    std::size_t n_;
    bool learn_output_map_;
    SquareMatrix w2_;
    SquareMatrix p_star_;
    SquareMatrix gram_w2_;     // w2^T w2
    SquareMatrix input_gram_;  // mean z z^T, z = w1 x
    SquareMatrix cross_;       // mean z y^T
    SquareMatrix linear_;      // w2^T (mean y z^T)
    SquareMatrix grad_star_;   // gradient at P*
    double loss_star_ = 0.0;
    double target_energy_ = 0.0;
    double lipschitz_ = 0.0;
};

/// lambda = 1e-2 * mean ||y||^2, which keeps penalty and loss gradients
/// commensurate for every n.
double default_shuffle_lambda(const ShuffleProblem& problem);

/// Step 1 / lipschitz, tangent gradients, 5000 linearly decaying iterations,
/// trace every 625 iterations.
OptimizerConfig default_shuffle_config(const ShuffleProblem& problem);

struct RecoveryResult {
    OptimizationResult best;
    std::uint64_t best_seed = 0;
    bool recovered = false;
    std::size_t failed_restarts = 0;
};

/// Best-of-restarts run (seeds cfg.seed, cfg.seed+1, ...), ranked by the
/// loss at the rounded permutation. Throws RunFailure if every restart fails.
RecoveryResult recover_shuffle(const ShuffleTask& task, const ShuffleDataset& data,
                               const OptimizerConfig& cfg, std::size_t restarts = 8,
                               bool learn_output_map = false);

struct SweepRow {
    double lambda = 0.0;
    double relaxed_loss = 0.0;
    double rounded_loss = 0.0;
    double penalty = 0.0;
    bool recovered = false;
    std::string failure;
    std::vector<TraceRecord> trace;
};

/// One recovery per lambda; failed rows carry the error and the sweep continues.
std::vector<SweepRow> lambda_sweep(const ShuffleTask& task, const ShuffleDataset& data,
                                   std::span<const double> lambdas, const OptimizerConfig& cfg,
                                   std::size_t restarts = 8);

/// CSV with header: lambda,relaxed_loss,rounded_loss,penalty,recovered
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace permrelax
