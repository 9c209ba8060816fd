#include "permrelax/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "permrelax/penalty.hpp"
#include "permrelax/projection.hpp"
#include "permrelax/rounding.hpp"

namespace permrelax {

namespace {

void remove_row_column_means(SquareMatrix& g) {
    const std::size_t n = g.n();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> row_mean(n, 0.0), col_mean(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            row_mean[i] += g(i, j);
            col_mean[j] += g(i, j);
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        total += row_mean[k];
        row_mean[k] *= inv_n;
        col_mean[k] *= inv_n;
    }
    total *= inv_n * inv_n;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            g(i, j) += total - row_mean[i] - col_mean[j];
        }
    }
}

std::vector<Permutation> round_all(std::span<const SquareMatrix> matrices) {
    std::vector<Permutation> out;
    out.reserve(matrices.size());
    for (const auto& m : matrices) {
        out.push_back(nearest_permutation_lap(m));
    }
    return out;
}

bool argmax_agrees(std::span<const SquareMatrix> matrices, std::span<const Permutation> lap) {
    for (std::size_t j = 0; j < matrices.size(); ++j) {
        try {
            if (round_argmax(matrices[j]) != lap[j]) {
                return false;
            }
        } catch (const Collision&) {
            return false;
        }
    }
    return true;
}

}  // namespace

double OptimizerConfig::learning_rate_at(std::size_t iteration) const {
    if (schedule == LearningRateSchedule::constant) {
        return learning_rate;
    }
    const double t = static_cast<double>(iteration);
    const double total = static_cast<double>(total_iterations);
    return learning_rate * std::max(0.0, 1.0 - t / total);
}

void OptimizerConfig::validate() const {
    if (total_iterations < 1) {
        throw DomainError("total_iterations must be at least 1");
    }
    if (!(learning_rate > 0.0)) {
        throw DomainError("initial learning rate must be positive");
    }
    if (!(lambda >= 0.0)) {
        throw DomainError("lambda must be nonnegative");
    }
    if (ras_passes_per_step < 1) {
        throw DomainError("ras_passes_per_step must be at least 1");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw DomainError("momentum must lie in [0, 1)");
    }
    PenaltyConfig{lambda, norm_guard}.validate();
}

RunFailure::RunFailure(const std::string& cause, std::size_t iteration_,
                       std::vector<TraceRecord> trace_)
    : Error("optimization failed at iteration " + std::to_string(iteration_) + ": " + cause),
      iteration(iteration_),
      trace(std::move(trace_)) {}

OptimizerState initialize(const ObjectiveProblem& problem, const OptimizerConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    OptimizerState state;
    state.weights.resize(problem.weight_dimension());
    for (double& w : state.weights) {
        w = gauss(rng);
    }
    for (std::size_t n : problem.dimensions()) {
        SquareMatrix m(n);
        for (double& v : m.values()) {
            v = std::abs(gauss(rng));
        }
        state.matrices.push_back(ras_pass(std::move(m)));
    }
    state.weight_velocity.assign(state.weights.size(), 0.0);
    for (const auto& m : state.matrices) {
        state.matrix_velocity.emplace_back(m.n());
    }
    return state;
}

OptimizerState step(const ObjectiveProblem& problem, OptimizerState state,
                    const OptimizerConfig& cfg) {
    const double eta = cfg.learning_rate_at(state.iteration);
    const double lambda = cfg.lambda;
    const PenaltyConfig penalty{lambda, cfg.norm_guard};

    // (1) gradient of f = L + lambda * sum_j P(M_j) at the current iterate
    Gradient grad = problem.iteration_gradient(state.iteration, state.weights, state.matrices);
    if (lambda > 0.0) {
        for (std::size_t j = 0; j < state.matrices.size(); ++j) {
            SquareMatrix pg = penalty_subgradient(state.matrices[j], penalty);
            pg *= lambda;
            grad.matrices[j] += pg;
        }
    }

    // (2) weights
    for (std::size_t k = 0; k < state.weights.size(); ++k) {
        state.weight_velocity[k] = cfg.momentum * state.weight_velocity[k] + grad.weights[k];
        state.weights[k] -= eta * state.weight_velocity[k];
    }

    // (3)-(6) matrices
    for (std::size_t j = 0; j < state.matrices.size(); ++j) {
        SquareMatrix& g = grad.matrices[j];
        if (cfg.gradient_mode == GradientMode::tangent) {
            remove_row_column_means(g);
        }
        SquareMatrix& velocity = state.matrix_velocity[j];
        velocity *= cfg.momentum;
        velocity += g;
        SquareMatrix& m = state.matrices[j];
        for (std::size_t k = 0; k < m.size(); ++k) {
            m.values()[k] -= eta * velocity.values()[k];
        }
        m = threshold_nonnegative(std::move(m));
        for (std::size_t pass = 0; pass < cfg.ras_passes_per_step; ++pass) {
            m = ras_pass(std::move(m));
        }
    }
    ++state.iteration;
    return state;
}

double loss_at(const ObjectiveProblem& problem, std::span<const double> weights,
               std::span<const Permutation> permutations) {
    std::vector<SquareMatrix> matrices;
    matrices.reserve(permutations.size());
    for (const auto& p : permutations) {
        matrices.push_back(permutation_to_matrix(p));
    }
    return problem.loss(weights, matrices);
}

TraceRecord record(const ObjectiveProblem& problem, const OptimizerState& state) {
    TraceRecord rec;
    rec.iteration = state.iteration;
    rec.loss = problem.loss(state.weights, state.matrices);
    for (const auto& m : state.matrices) {
        rec.penalty += penalty_value(m);
        rec.constraint_violation = std::max(rec.constraint_violation, constraint_violation(m));
    }
    const auto rounded = round_all(state.matrices);
    rec.rounding_gap = loss_at(problem, state.weights, rounded) - rec.loss;
    rec.argmax_agrees = argmax_agrees(state.matrices, rounded);
    return rec;
}

OptimizationResult run(const ObjectiveProblem& problem, const OptimizerConfig& cfg) {
    cfg.validate();
    OptimizerState state = initialize(problem, cfg);
    std::vector<TraceRecord> trace;
    trace.push_back(record(problem, state));
    while (state.iteration < cfg.total_iterations) {
        try {
            state = step(problem, std::move(state), cfg);
        } catch (const ZeroSum& e) {
            throw RunFailure(e.what(), state.iteration, std::move(trace));
        }
        const bool last = state.iteration == cfg.total_iterations;
        if (last || (cfg.record_every > 0 && state.iteration % cfg.record_every == 0)) {
            trace.push_back(record(problem, state));
        }
    }

    OptimizationResult result;
    result.rounded = round_all(state.matrices);
    result.final_loss = problem.loss(state.weights, state.matrices);
    result.rounded_loss = loss_at(problem, state.weights, result.rounded);
    result.rounding_gap = result.rounded_loss - result.final_loss;
    for (const auto& m : state.matrices) {
        result.final_penalty += penalty_value(m);
    }
    result.final_weights = std::move(state.weights);
    result.relaxed_matrices = std::move(state.matrices);
    result.trace = std::move(trace);
    return result;
}

std::vector<RestartOutcome> run_restarts(const ObjectiveProblem& problem,
                                         const OptimizerConfig& cfg,
                                         std::span<const std::uint64_t> seeds) {
    std::vector<RestartOutcome> outcomes(seeds.size());
    const auto count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        OptimizerConfig local = cfg;
        local.seed = seeds[static_cast<std::size_t>(k)];
        RestartOutcome& out = outcomes[static_cast<std::size_t>(k)];
        out.seed = local.seed;
        try {
            out.result = run(problem, local);
        } catch (const Error& e) {
            out.failure = e.what();
        }
    }
    return outcomes;
}

std::optional<std::size_t> best_restart(std::span<const RestartOutcome> outcomes) {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (!outcomes[k].result) {
            continue;
        }
        if (!best || outcomes[k].result->rounded_loss < outcomes[*best].result->rounded_loss) {
            best = k;
        }
    }
    return best;
}

GradientCheck check_gradient(const ObjectiveProblem& problem, std::span<const double> weights,
                             std::span<const SquareMatrix> matrices, double step) {
    const Gradient analytic = problem.loss_gradient(weights, matrices);
    std::vector<double> w(weights.begin(), weights.end());
    std::vector<SquareMatrix> ms(matrices.begin(), matrices.end());
    GradientCheck check;
    auto compare = [&](double a, double numeric) {
        const double err = std::abs(a - numeric);
        check.max_abs_error = std::max(check.max_abs_error, err);
        check.max_rel_error = std::max(check.max_rel_error, err / std::max(1.0, std::abs(numeric)));
    };
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double saved = w[k];
        w[k] = saved + step;
        const double up = problem.loss(w, ms);
        w[k] = saved - step;
        const double down = problem.loss(w, ms);
        w[k] = saved;
        compare(analytic.weights[k], (up - down) / (2.0 * step));
    }
    for (std::size_t j = 0; j < ms.size(); ++j) {
        for (std::size_t k = 0; k < ms[j].size(); ++k) {
            double& entry = ms[j].values()[k];
            const double saved = entry;
            entry = saved + step;
            const double up = problem.loss(w, ms);
            entry = saved - step;
            const double down = problem.loss(w, ms);
            entry = saved;
            compare(analytic.matrices[j].values()[k], (up - down) / (2.0 * step));
        }
    }
    return check;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
    const auto old_precision = out.precision(12);
    out << "iteration,loss,penalty,constraint_violation,rounding_gap,argmax_agrees\n";
    for (const auto& r : trace) {
        out << r.iteration << ',' << r.loss << ',' << r.penalty << ',' << r.constraint_violation
            << ',' << r.rounding_gap << ',' << (r.argmax_agrees ? 1 : 0) << '\n';
    }
    out.precision(old_precision);
}

}  // namespace permrelax
