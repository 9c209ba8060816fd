#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "permrelax/penalty.hpp"
#include "permrelax/qap.hpp"
#include "permrelax/rounding.hpp"
#include "support.hpp"

using namespace permrelax;

namespace {

QapInstance example1() {
    return {SquareMatrix{{1, 2}, {3, 1}}, SquareMatrix{{0, 2}, {3, 1}}};
}

QapInstance example2() {
    return {SquareMatrix{{2, 1}, {1, 0}}, SquareMatrix{{0, 1}, {1, 0}}};
}

SquareMatrix line(double q) { return SquareMatrix{{q, 1 - q}, {1 - q, q}}; }

// sum_{i,k} a(i,k) b(p(i),p(k)) style objective, written out by index
double index_gm(const QapInstance& inst, const Permutation& p) {
    const std::size_t n = inst.n();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // (A Q)_{ij} = A(i, p^-1 j), (Q B)_{ij} = B(p(i), j)
            double aq = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (p[k] == j) {
                    aq = inst.a(i, k);
                }
            }
            const double d = aq - inst.b(p[i], j);
            s += d * d;
        }
    }
    return s;
}

OptimizerConfig quick(const QapInstance& inst, std::size_t iterations = 3000) {
    OptimizerConfig cfg = default_qap_config(inst);
    cfg.total_iterations = iterations;
    return cfg;
}

}  // namespace

TEST_CASE("gm_objective examples") {
    CHECK(gm_objective(example1(), line(2.0 / 3.0)) == doctest::Approx(1.0 / 3.0));
    CHECK(gm_objective(example1(), SquareMatrix::identity(2)) == doctest::Approx(1.0));
    CHECK(qap_objective(example2(), Permutation::identity(2)) == doctest::Approx(4.0));
    CHECK_THROWS_AS(gm_objective(example1(), SquareMatrix::identity(3)), DimensionMismatch);
    CHECK_THROWS_AS(QapInstance(SquareMatrix::identity(2), SquareMatrix::identity(3)),
                    DimensionMismatch);
}

TEST_CASE("spectral_norm") {
    CHECK(spectral_norm(SquareMatrix::identity(4)) == doctest::Approx(1.0));
    CHECK(spectral_norm(SquareMatrix{{3, 0}, {0, -5}}) == doctest::Approx(5.0));
    CHECK(spectral_norm(SquareMatrix{{1, 1}, {1, 1}}) == doctest::Approx(2.0));
    CHECK(spectral_norm(SquareMatrix(3, 0.0)) == 0.0);
}

TEST_CASE("graph matching and trace forms agree on all 24 permutations at n = 4") {
    Rng rng(71);
    const QapInstance inst(random_uniform_matrix(4, rng), random_uniform_matrix(4, rng));
    const QapInstance trace(inst.a, inst.b, QapKind::general_qap);
    const double fa = frobenius_norm(inst.a), fb = frobenius_norm(inst.b);
    std::vector<std::size_t> map{0, 1, 2, 3};
    int count = 0;
    do {
        const Permutation p(map);
        const double gm = qap_objective(inst, p);
        CHECK(gm == doctest::Approx(fa * fa + fb * fb - 2.0 * qap_objective(trace, p)));
        CHECK(gm == doctest::Approx(index_gm(inst, p)));
        ++count;
    } while (std::next_permutation(map.begin(), map.end()));
    CHECK(count == 24);
}

TEST_CASE("property: relabelling both graphs by the same permutation keeps the optimum") {
    Rng rng(72);
    for (int k = 0; k < 30; ++k) {
        const std::size_t n = support::dim(rng, 2, 6);
        const QapInstance inst(random_uniform_matrix(n, rng), random_uniform_matrix(n, rng));
        const SquareMatrix r = permutation_to_matrix(random_permutation(n, rng));
        SquareMatrix rb(n);
        // R^T B R
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t a = 0; a < n; ++a) {
                    for (std::size_t b = 0; b < n; ++b) {
                        s += r(a, i) * inst.b(a, b) * r(b, j);
                    }
                }
                rb(i, j) = s;
            }
        }
        const QapInstance moved(inst.a, rb);
        REQUIRE(brute_force_oracle(moved).objective ==
                doctest::Approx(brute_force_oracle(inst).objective));
    }
}

TEST_CASE("property: the objective gradient matches finite differences") {
    Rng rng(73);
    for (int k = 0; k < 30; ++k) {
        const std::size_t n = support::dim(rng, 2, 7);
        for (auto kind : {QapKind::graph_matching, QapKind::general_qap}) {
            const QapProblem problem(
                QapInstance(support::gaussian(n, rng), support::gaussian(n, rng), kind));
            const SquareMatrix q = random_doubly_stochastic(n, rng);
            REQUIRE(check_gradient(problem, {}, std::span(&q, 1)).max_rel_error <= 1e-6);
        }
    }
}

TEST_CASE("convex relaxation reaches the interior optima of the examples") {
    const auto r1 = solve_convex_relaxed(example1(), quick(example1()), 4);
    CHECK(r1.matrix(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    CHECK(r1.objective == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    const auto r2 = solve_convex_relaxed(example2(), quick(example2()), 4);
    CHECK(r2.matrix(0, 0) == doctest::Approx(0.5).epsilon(1e-3));

    const QapInstance same(SquareMatrix::identity(3), SquareMatrix::identity(3));
    CHECK(solve_convex_relaxed(same, quick(same), 2).objective <= 1e-6);

    const QapInstance general(example1().a, example1().b, QapKind::general_qap);
    CHECK_THROWS_AS(solve_convex_relaxed(general, quick(general), 1), DomainError);
}

TEST_CASE("penalized solve pushes Example 1 to a vertex") {
    const auto inst = example1();
    const auto sol = solve_penalized(inst, 2.0, quick(inst), 4, Polish::none);
    CHECK(penalty_value(sol.relaxed) <= 1e-3);
    CHECK(nearest_permutation_lap(sol.relaxed) == sol.permutation);
    CHECK(sol.objective == doctest::Approx(qap_objective(inst, sol.permutation)));
    CHECK(sol.objective == sol.rounded_objective);
}

TEST_CASE("brute_force_oracle") {
    const auto o = brute_force_oracle(example2());
    CHECK(o.permutation == Permutation::identity(2));
    CHECK(o.objective == doctest::Approx(4.0));
    CHECK(brute_force_oracle(example1()).objective == doctest::Approx(1.0));
    CHECK_THROWS_AS(brute_force_oracle(QapInstance(SquareMatrix::identity(11),
                                                   SquareMatrix::identity(11))),
                    TooLarge);
}

TEST_CASE("property: parallel and serial oracles agree") {
    Rng rng(74);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = support::dim(rng, 1, 7);
        const QapInstance inst(random_uniform_matrix(n, rng), random_uniform_matrix(n, rng));
        const auto a = brute_force_oracle(inst);
        const auto b = serial::brute_force_oracle(inst);
        REQUIRE(a.permutation == b.permutation);
        REQUIRE(a.objective == b.objective);
    }
}

TEST_CASE("property: swap descent never worsens and ends at a swap-local optimum") {
    Rng rng(75);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = support::dim(rng, 2, 8);
        const QapInstance inst(random_uniform_matrix(n, rng), random_uniform_matrix(n, rng));
        const auto start = random_permutation(n, rng);
        const auto end = swap_descent(inst, start);
        const double f = qap_objective(inst, end);
        REQUIRE(f <= qap_objective(inst, start) + 1e-12);
        auto map = end.map();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                std::swap(map[i], map[j]);
                REQUIRE(qap_objective(inst, Permutation(map)) >= f - 1e-9 * std::max(1.0, f));
                std::swap(map[i], map[j]);
            }
        }
    }
}

TEST_CASE("property: polished penalized solutions match the oracle on most small instances") {
    Rng rng(76);
    int matched = 0;
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 2);
        const QapInstance inst(random_uniform_matrix(n, rng), random_uniform_matrix(n, rng));
        OptimizerConfig cfg = default_qap_config(inst);
        cfg.seed = static_cast<std::uint64_t>(k) * 10;
        const auto sol = solve_penalized(inst, default_qap_lambda(inst), cfg, 4);
        const auto oracle = brute_force_oracle(inst);
        REQUIRE(sol.objective >= oracle.objective - 1e-12);
        matched += sol.objective <= oracle.objective + 1e-9;
    }
    CHECK(matched >= 16);
}

TEST_CASE("instance text format") {
    std::stringstream ss;
    write_qap_instance(ss, example1());
    const auto back = read_qap_instance(ss);
    CHECK(back.a == example1().a);
    CHECK(back.b == example1().b);

    auto parse = [](const char* text) {
        std::istringstream in(text);
        return read_qap_instance(in);
    };
    CHECK_THROWS_AS(parse("0\n"), ParseError);
    CHECK_THROWS_AS(parse("2\n1 2\n3 4\n\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse("1\n1\n\n2\n3\n"), ParseError);
    CHECK_THROWS_AS(parse("1\ninf\n\n2\n"), ParseError);
}

TEST_CASE("fixture instances load") {
    std::ifstream in(PERMRELAX_FIXTURES "/random4.qap");
    REQUIRE(in);
    const auto inst = read_qap_instance(in);
    CHECK(inst.n() == 4);
}
