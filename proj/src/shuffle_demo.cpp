#include "permrelax/shuffle_demo.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>

#include "permrelax/kernels.hpp"
#include "permrelax/qap.hpp"

namespace permrelax {

namespace {

double trace_product(const Matrix& a, const Matrix& b) {
    // trace(a^T b)
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a.values()[k] * b.values()[k];
    }
    return s;
}

SquareMatrix to_square(std::span<const double> weights, std::size_t n) {
    return SquareMatrix(n, std::vector<double>(weights.begin(), weights.end()));
}

}  // namespace

GeneratedTask generate_task(const ShuffleTaskSpec& spec, std::uint64_t seed) {
    if (spec.n < 2) {
        throw DomainError("shuffle task needs n >= 2");
    }
    if (spec.samples < 10 * spec.n) {
        throw DomainError("shuffle task needs at least 10 n samples");
    }
    if (!(spec.noise_std >= 0.0)) {
        throw DomainError("noise_std must be nonnegative");
    }
    const std::size_t n = spec.n;
    const std::size_t d = spec.input_dim ? spec.input_dim : (n + 1) / 2;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto fill = [&](Matrix& m) {
        for (double& v : m.values()) {
            v = gauss(rng);
        }
    };

    GeneratedTask out;
    ShuffleTask& task = out.task;
    task.n = n;
    task.input_dim = d;
    task.noise_std = spec.noise_std;
    task.w1 = Matrix(n, d);
    task.w2 = SquareMatrix(n);
    fill(task.w1);
    fill(task.w2);
    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), std::size_t{0});
    std::shuffle(map.begin(), map.end(), rng);
    task.p_star = Permutation(std::move(map));

    out.data.inputs = Matrix(spec.samples, d);
    fill(out.data.inputs);
    // rows of targets: y^T = x^T w1^T P*^T w2^T
    const Matrix z = kernels::matmul_nt(out.data.inputs, task.w1);
    const Matrix shuffled = kernels::matmul_nt(z, permutation_to_matrix(task.p_star));
    out.data.targets = kernels::matmul_nt(shuffled, task.w2);
    if (spec.noise_std > 0.0) {
        for (double& v : out.data.targets.values()) {
            v += spec.noise_std * gauss(rng);
        }
    }
    return out;
}

double dataset_loss(const ShuffleTask& task, const ShuffleDataset& data, const SquareMatrix& m,
                    const Matrix& w2) {
    const std::size_t n = task.n;
    const std::size_t d = task.input_dim;
    std::vector<double> z(n), mz(n);
    double total = 0.0;
    for (std::size_t s = 0; s < data.inputs.rows(); ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                acc += task.w1(i, k) * data.inputs(s, k);
            }
            z[i] = acc;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += m(i, k) * z[k];
            }
            mz[i] = acc;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += w2(i, k) * mz[k];
            }
            const double r = acc - data.targets(s, i);
            total += r * r;
        }
    }
    return total / static_cast<double>(data.inputs.rows());
}

ShuffleProblem::ShuffleProblem(const ShuffleTask& task, const ShuffleDataset& data,
                               bool learn_output_map)
    : n_(task.n),
      learn_output_map_(learn_output_map),
      w2_(task.w2),
      p_star_(permutation_to_matrix(task.p_star)) {
    const double inv_samples = 1.0 / static_cast<double>(data.inputs.rows());
    const Matrix z = kernels::matmul_nt(data.inputs, task.w1);  // samples x n
    input_gram_ = SquareMatrix(kernels::matmul_tn(z, z));
    input_gram_ *= inv_samples;
    cross_ = SquareMatrix(kernels::matmul_tn(z, data.targets));
    cross_ *= inv_samples;
    gram_w2_ = SquareMatrix(kernels::matmul_tn(w2_, w2_));
    linear_ = SquareMatrix(kernels::matmul_nt(w2_.transposed(), cross_));

    target_energy_ = trace_product(data.targets, data.targets) * inv_samples;
    loss_star_ = dataset_loss(task, data, p_star_, w2_);
    grad_star_ = SquareMatrix(kernels::matmul(kernels::matmul(gram_w2_, p_star_), input_gram_));
    grad_star_ -= linear_;
    grad_star_ *= 2.0;
    lipschitz_ = 2.0 * spectral_norm(gram_w2_) * spectral_norm(input_gram_);
}

double ShuffleProblem::loss(std::span<const double> weights,
                            std::span<const SquareMatrix> matrices) const {
    const SquareMatrix& m = matrices[0];
    if (!learn_output_map_) {
        // Exact quadratic expansion around P*; no cancellation near the optimum.
        const Matrix delta = m - p_star_;
        const Matrix curvature = kernels::matmul(kernels::matmul(gram_w2_, delta), input_gram_);
        return loss_star_ + trace_product(grad_star_, delta) + trace_product(delta, curvature);
    }
    const SquareMatrix w2 = to_square(weights, n_);
    const Matrix w2m = kernels::matmul(w2, m);
    // tr(w2 M H M^T w2^T) - 2 tr(w2 M C) + mean ||y||^2
    const double quadratic = trace_product(w2m, kernels::matmul(w2m, input_gram_));
    const double linear = trace_product(w2m, cross_.transposed());
    return quadratic - 2.0 * linear + target_energy_;
}

Gradient ShuffleProblem::loss_gradient(std::span<const double> weights,
                                       std::span<const SquareMatrix> matrices) const {
    const SquareMatrix& m = matrices[0];
    Gradient g;
    if (!learn_output_map_) {
        SquareMatrix gm(kernels::matmul(kernels::matmul(gram_w2_, m), input_gram_) - linear_);
        gm *= 2.0;
        g.matrices.push_back(std::move(gm));
        return g;
    }
    const SquareMatrix w2 = to_square(weights, n_);
    const Matrix w2m = kernels::matmul(w2, m);
    // residual covariance: w2 M H - C^T
    const Matrix r = kernels::matmul(w2m, input_gram_) - cross_.transposed();
    SquareMatrix gm(kernels::matmul_tn(w2, r));
    gm *= 2.0;
    Matrix gw = kernels::matmul_nt(r, m);
    gw *= 2.0;
    g.weights.assign(gw.values().begin(), gw.values().end());
    g.matrices.push_back(std::move(gm));
    return g;
}

double default_shuffle_lambda(const ShuffleProblem& problem) {
    return 1e-2 * problem.target_energy();
}

OptimizerConfig default_shuffle_config(const ShuffleProblem& problem) {
    OptimizerConfig cfg;
    cfg.learning_rate = problem.lipschitz() > 0.0 ? 1.0 / problem.lipschitz() : 1.0;
    cfg.total_iterations = 5000;
    cfg.record_every = 625;
    cfg.gradient_mode = GradientMode::tangent;
    cfg.lambda = default_shuffle_lambda(problem);
    return cfg;
}

RecoveryResult recover_shuffle(const ShuffleTask& task, const ShuffleDataset& data,
                               const OptimizerConfig& cfg, std::size_t restarts,
                               bool learn_output_map) {
    const ShuffleProblem problem(task, data, learn_output_map);
    std::vector<std::uint64_t> seeds(std::max<std::size_t>(1, restarts));
    std::iota(seeds.begin(), seeds.end(), cfg.seed);
    auto outcomes = run_restarts(problem, cfg, seeds);
    const auto best = best_restart(outcomes);
    if (!best) {
        throw RunFailure("every restart failed: " + outcomes.front().failure, 0, {});
    }
    RecoveryResult out;
    out.best_seed = outcomes[*best].seed;
    out.best = std::move(*outcomes[*best].result);
    out.recovered = out.best.rounded[0] == task.p_star;
    out.failed_restarts = static_cast<std::size_t>(std::count_if(
        outcomes.begin(), outcomes.end(), [](const RestartOutcome& o) { return !o.result; }));
    return out;
}

std::vector<SweepRow> lambda_sweep(const ShuffleTask& task, const ShuffleDataset& data,
                                   std::span<const double> lambdas, const OptimizerConfig& cfg,
                                   std::size_t restarts) {
    std::vector<SweepRow> rows;
    for (double lambda : lambdas) {
        SweepRow row;
        row.lambda = lambda;
        OptimizerConfig local = cfg;
        local.lambda = lambda;
        try {
            RecoveryResult r = recover_shuffle(task, data, local, restarts);
            row.relaxed_loss = r.best.final_loss;
            row.rounded_loss = r.best.rounded_loss;
            row.penalty = r.best.final_penalty;
            row.recovered = r.recovered;
            row.trace = std::move(r.best.trace);
        } catch (const Error& e) {
            row.failure = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    const auto old_precision = out.precision(12);
    out << "lambda,relaxed_loss,rounded_loss,penalty,recovered\n";
    for (const auto& r : rows) {
        out << r.lambda << ',' << r.relaxed_loss << ',' << r.rounded_loss << ',' << r.penalty << ','
            << (r.recovered ? "true" : "false") << '\n';
    }
    out.precision(old_precision);
}

}  // namespace permrelax
