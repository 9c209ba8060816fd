#include <doctest.h>

#include <cmath>
#include <limits>

#include "permrelax/projection.hpp"
#include "support.hpp"

using namespace permrelax;

TEST_CASE("ras_pass on a 2x2 example") {
    const SquareMatrix r = ras_pass(SquareMatrix{{1, 1}, {1, 3}});
    CHECK(r(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(r(0, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(r(1, 0) == doctest::Approx(0.4));
    CHECK(r(1, 1) == doctest::Approx(0.6));
}

TEST_CASE("threshold_nonnegative clips negatives only") {
    CHECK(threshold_nonnegative(SquareMatrix{{-1, 2}, {0, -0.5}}) == SquareMatrix{{0, 2}, {0, 0}});
    CHECK(threshold_nonnegative(SquareMatrix::identity(3)) == SquareMatrix::identity(3));
}

TEST_CASE("ras_pass rejects empty rows and columns") {
    try {
        ras_pass(SquareMatrix{{1, 0}, {1, 0}});
        FAIL("expected ZeroSum");
    } catch (const ZeroSum& e) {
        CHECK(e.axis == Axis::column);
        CHECK(e.index == 1);
    }
    CHECK_THROWS_AS(ras_pass(SquareMatrix(3, 0.0)), ZeroSum);
    CHECK_THROWS_AS(ras_pass(SquareMatrix{{std::numeric_limits<double>::infinity(), 1}, {1, 1}}),
                    ZeroSum);
}

TEST_CASE("iterate_to_tolerance") {
    SUBCASE("feasible input needs no sweeps") {
        const auto r = iterate_to_tolerance(SquareMatrix::identity(4));
        CHECK(r.iterations == 0);
        CHECK(r.matrix == SquareMatrix::identity(4));
    }
    SUBCASE("converges on a positive matrix") {
        const auto r = iterate_to_tolerance(SquareMatrix{{1, 1}, {1, 3}});
        CHECK(r.iterations > 0);
        CHECK(constraint_violation(r.matrix) <= 1e-8);
    }
    SUBCASE("NoConvergence carries the last iterate") {
        ProjectionConfig cfg;
        cfg.max_iters = 1;
        cfg.epsilon = 1e-14;
        try {
            iterate_to_tolerance(SquareMatrix{{1, 5}, {2, 9}}, cfg);
            FAIL("expected NoConvergence");
        } catch (const NoConvergence& e) {
            CHECK(e.iterations == 1);
            CHECK(e.violation > 1e-14);
            CHECK(e.best.n() == 2);
        }
    }
    SUBCASE("config validation") {
        ProjectionConfig bad;
        bad.epsilon = 0.0;
        CHECK_THROWS_AS(bad.validate(), DomainError);
        CHECK_THROWS_AS(iterate_to_tolerance(SquareMatrix::identity(2), bad), DomainError);
    }
}

TEST_CASE("property: ras_pass gives unit row sums and keeps entries in [0, 1]") {
    Rng rng(41);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = support::dim(rng, 1, 40);
        const auto m = ras_pass(random_positive_matrix(n, rng));
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(std::abs(support::row_sum(m, i) - 1.0) <= 1e-12);
        }
        for (double v : m.values()) {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
    }
}

TEST_CASE("property: ras_pass is invariant to positive rescaling") {
    Rng rng(42);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = support::dim(rng, 2, 20);
        const auto m = random_positive_matrix(n, rng);
        SquareMatrix scaled = m;
        scaled *= support::uniform(rng, 0.01, 100.0);
        REQUIRE(frobenius_distance(ras_pass(m), ras_pass(scaled)) <= 1e-12);
    }
}

TEST_CASE("property: zero pattern survives scaling") {
    Rng rng(43);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = support::dim(rng, 2, 12);
        SquareMatrix m = random_positive_matrix(n, rng);
        // keep the diagonal so no row or column empties
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && support::uniform(rng) < 0.4) {
                    m(i, j) = 0.0;
                }
            }
        }
        const auto r = ras_pass(m);
        for (std::size_t i = 0; i < n * n; ++i) {
            REQUIRE((r.values()[i] == 0.0) == (m.values()[i] == 0.0));
        }
    }
}

TEST_CASE("property: Sinkhorn violation shrinks and doubly stochastic inputs are fixed") {
    Rng rng(44);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = support::dim(rng, 2, 30);
        SquareMatrix m = random_positive_matrix(n, rng);
        double prev = std::numeric_limits<double>::infinity();
        for (int s = 0; s < 20; ++s) {
            m = ras_pass(std::move(m));
            const double v = constraint_violation(m);
            REQUIRE(v <= prev + 1e-12);
            prev = v;
        }
        const auto ds = random_doubly_stochastic(n, rng);
        REQUIRE(frobenius_distance(ras_pass(ds), ds) <= 1e-12);
    }
}
