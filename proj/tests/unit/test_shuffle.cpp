#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "permrelax/shuffle_demo.hpp"
#include "support.hpp"

using namespace permrelax;

namespace {

GeneratedTask task(std::size_t n, std::uint64_t seed, double noise = 0.0) {
    ShuffleTaskSpec spec;
    spec.n = n;
    spec.samples = std::max<std::size_t>(256, 20 * n);
    spec.noise_std = noise;
    return generate_task(spec, seed);
}

}  // namespace

TEST_CASE("generate_task shapes and validation") {
    const auto g = task(7, 1);
    CHECK(g.task.n == 7);
    CHECK(g.task.input_dim == 4);
    CHECK(g.task.w1.rows() == 7);
    CHECK(g.task.w1.cols() == 4);
    CHECK(g.data.inputs.rows() == 256);
    CHECK(g.data.targets.cols() == 7);
    CHECK(g.task.p_star.n() == 7);

    ShuffleTaskSpec spec;
    spec.n = 1;
    CHECK_THROWS_AS(generate_task(spec, 0), DomainError);
    spec.n = 8;
    spec.samples = 79;
    CHECK_THROWS_AS(generate_task(spec, 0), DomainError);
    spec.samples = 80;
    spec.noise_std = -1.0;
    CHECK_THROWS_AS(generate_task(spec, 0), DomainError);

    const auto again = task(7, 1);
    CHECK(again.task.p_star == g.task.p_star);
    CHECK(again.data.targets == g.data.targets);
}

TEST_CASE("property: the hidden permutation has zero noiseless loss") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = task(3 + seed % 6, seed);
        const ShuffleProblem problem(g.task, g.data);
        const SquareMatrix p = permutation_to_matrix(g.task.p_star);
        REQUIRE(dataset_loss(g.task, g.data, p, g.task.w2) <= 1e-20);
        REQUIRE(std::abs(problem.loss({}, std::span(&p, 1))) <= 1e-12);
    }
}

TEST_CASE("property: second-moment loss matches the per-sample loss") {
    Rng rng(91);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = support::dim(rng, 2, 12);
        const auto g = task(n, seed, support::uniform(rng, 0.0, 0.3));
        const ShuffleProblem problem(g.task, g.data);
        const auto m = random_doubly_stochastic(n, rng);
        REQUIRE(problem.loss({}, std::span(&m, 1)) ==
                doctest::Approx(dataset_loss(g.task, g.data, m, g.task.w2)).epsilon(1e-9));
        REQUIRE(check_gradient(problem, {}, std::span(&m, 1)).max_rel_error <= 1e-5);
    }
}

TEST_CASE("learned output map gradient") {
    const auto g = task(4, 3);
    const ShuffleProblem problem(g.task, g.data, true);
    CHECK(problem.weight_dimension() == 16);
    Rng rng(92);
    std::vector<double> w(16);
    for (double& v : w) {
        v = support::uniform(rng, -1, 1);
    }
    const auto m = random_doubly_stochastic(4, rng);
    CHECK(check_gradient(problem, w, std::span(&m, 1)).max_rel_error <= 1e-5);
    Matrix w2(4, 4, w);
    CHECK(problem.loss(w, std::span(&m, 1)) ==
          doctest::Approx(dataset_loss(g.task, g.data, m, w2)).epsilon(1e-9));
}

TEST_CASE("tuned run recovers the permutation with decaying penalty and rounding gap") {
    const auto g = task(8, 808);
    const ShuffleProblem problem(g.task, g.data);
    OptimizerConfig cfg = default_shuffle_config(problem);
    cfg.seed = 808;
    CHECK(cfg.lambda == default_shuffle_lambda(problem));
    const auto r = recover_shuffle(g.task, g.data, cfg, 8);
    CHECK(r.recovered);
    const auto& trace = r.best.trace;
    REQUIRE(trace.size() == 9);
    CHECK(trace.back().penalty <= 0.01 * trace.front().penalty);
    const auto& quarter = trace[2];
    REQUIRE(quarter.iteration == cfg.total_iterations / 4);
    CHECK(std::abs(trace.back().rounding_gap) <= 0.1 * std::abs(quarter.rounding_gap));
    for (const auto& rec : trace) {
        CHECK(rec.constraint_violation <= 1.0);
    }
}

TEST_CASE("lambda sweep: no penalty leaves the largest penalty") {
    const auto g = task(8, 17);
    const ShuffleProblem problem(g.task, g.data);
    OptimizerConfig cfg = default_shuffle_config(problem);
    cfg.seed = 17;
    const double tuned = default_shuffle_lambda(problem);
    const double lambdas[] = {0.0, 0.1 * tuned, tuned, 3.0 * tuned};
    const auto rows = lambda_sweep(g.task, g.data, lambdas, cfg, 4);
    REQUIRE(rows.size() == 4);
    int inversions = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].lambda == lambdas[k]);
        CHECK(rows[k].failure.empty());
        if (k > 0) {
            CHECK(rows[0].penalty > rows[k].penalty);
            inversions += rows[k].penalty > rows[k - 1].penalty;
        }
    }
    CHECK(inversions <= 1);
    CHECK(rows[2].recovered);

    std::ostringstream out;
    write_sweep_csv(out, rows);
    CHECK(out.str().rfind("lambda,relaxed_loss,rounded_loss,penalty,recovered\n", 0) == 0);
}

TEST_CASE("recovery is deterministic") {
    const auto g = task(6, 5);
    const ShuffleProblem problem(g.task, g.data);
    OptimizerConfig cfg = default_shuffle_config(problem);
    cfg.total_iterations = 500;
    cfg.seed = 5;
    const auto a = recover_shuffle(g.task, g.data, cfg, 3);
    const auto b = recover_shuffle(g.task, g.data, cfg, 3);
    CHECK(a.best_seed == b.best_seed);
    CHECK(a.best.relaxed_matrices[0] == b.best.relaxed_matrices[0]);
    CHECK(a.best.final_loss == b.best.final_loss);
}
