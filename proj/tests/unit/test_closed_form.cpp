#include <doctest.h>

#include <cmath>

#include "permrelax/closed_form.hpp"
#include "permrelax/penalty.hpp"
#include "permrelax/qap.hpp"
#include "support.hpp"

using namespace permrelax;

namespace {

double s_of(double q) { return std::sqrt(q * q + (1 - q) * (1 - q)); }

}  // namespace

TEST_CASE("BirkhoffLine2") {
    CHECK(BirkhoffLine2(0.25).matrix() == SquareMatrix{{0.25, 0.75}, {0.75, 0.25}});
    CHECK_THROWS_AS(BirkhoffLine2(-0.1), DomainError);
    CHECK_THROWS_AS(BirkhoffLine2(1.1), DomainError);
    CHECK_THROWS_AS(example1_F(2.0, 0.0), DomainError);
    CHECK_THROWS_AS(example2_F(-1.0, 0.0), DomainError);
}

TEST_CASE("example landscapes agree with the matrix objective plus penalty") {
    const QapInstance e1(SquareMatrix{{1, 2}, {3, 1}}, SquareMatrix{{0, 2}, {3, 1}});
    const QapInstance e2(SquareMatrix{{2, 1}, {1, 0}}, SquareMatrix{{0, 1}, {1, 0}});
    for (double lambda : {0.0, 0.5, 2.0}) {
        for (double q = 0.0; q <= 1.0; q += 0.05) {
            const SquareMatrix m = BirkhoffLine2(q).matrix();
            const double pen = lambda * penalty_value(m);
            CHECK(example1_F(q, lambda) == doctest::Approx(gm_objective(e1, m) + pen - 1 - 4 * lambda));
            CHECK(example2_F(q, lambda) == doctest::Approx(gm_objective(e2, m) + pen - 4 * lambda));
        }
    }
}

TEST_CASE("example curves") {
    CHECK(example2_F(0.0, 2.0) == doctest::Approx(-4.0));
    CHECK(example2_F(1.0, 2.0) == doctest::Approx(-4.0));
    CHECK(example_curve(1, 0.5)(0.3) == example1_F(0.3, 0.5));
    CHECK(example_curve(2, 0.5)(0.3) == example2_F(0.3, 0.5));
    TwoLayerTeacher t;
    t.m = 1.0;
    CHECK(example_curve(3, 0.4, 1.0)(0.3) == example3_F(0.3, t, 0.4));
    CHECK_THROWS_AS(example_curve(4, 0.0), UnknownExample);
    CHECK_THROWS_AS(example_curve(0, 0.0), UnknownExample);
}

TEST_CASE("Example 2 at lambda 1.5 has two minima off the midpoint") {
    const auto minima = grid_local_minima(example_curve(2, 1.5), 0.0, 1.0);
    REQUIRE(minima.size() == 2);
    CHECK(minima[0].argmin < 0.5);
    CHECK(minima[1].argmin > 0.5);
    CHECK(s_of(minima[0].argmin) == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(minima[0].argmin + minima[1].argmin == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(grid_minimize(example_curve(2, 2.0), 0.0, 1.0).argmin == 0.0);
}

TEST_CASE("property: F is nonincreasing in lambda") {
    Rng rng(81);
    for (int k = 0; k < 200; ++k) {
        const double q = support::uniform(rng);
        const double l1 = support::uniform(rng, 0.0, 3.0);
        const double l2 = l1 + support::uniform(rng, 0.0, 1.0);
        for (int ex : {1, 2, 3}) {
            REQUIRE(example_curve(ex, l2)(q) <= example_curve(ex, l1)(q) + 1e-12);
        }
    }
}

TEST_CASE("relu_cross_moment") {
    // integral of relu(x1)^2 over the square
    CHECK(relu_cross_moment(1, 0, 1, 0) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(relu_cross_moment(-1, 0, 1, 0), DomainError);
    CHECK_THROWS_AS(relu_cross_moment(0, 0, 1, 0), DomainError);
}

TEST_CASE("property: relu_cross_moment is symmetric and continuous across branches") {
    Rng rng(82);
    for (int k = 0; k < 200; ++k) {
        const double q = support::uniform(rng), r = support::uniform(rng, 0.01, 1.0);
        const double s = support::uniform(rng), t = support::uniform(rng, 0.01, 1.0);
        REQUIRE(relu_cross_moment(q, r, s, t) == doctest::Approx(relu_cross_moment(s, t, q, r)));
        // scaling
        REQUIRE(relu_cross_moment(2 * q, 2 * r, s, t) ==
                doctest::Approx(2 * relu_cross_moment(q, r, s, t)));
    }
    for (double x : {0.3, 0.5, 1.0, 2.0}) {
        for (double h : {1e-7, -1e-7}) {
            REQUIRE(relu_cross_moment(x + h, x, 1.0, 0.5) ==
                    doctest::Approx(relu_cross_moment(x, x, 1.0, 0.5)).epsilon(1e-5));
            REQUIRE(relu_cross_moment(1.0, 0.5, x, x + h) ==
                    doctest::Approx(relu_cross_moment(1.0, 0.5, x, x)).epsilon(1e-5));
        }
    }
}

TEST_CASE("property: relu_cross_moment agrees with Monte Carlo") {
    Rng rng(83);
    for (int k = 0; k < 10; ++k) {
        const double q = support::uniform(rng), r = support::uniform(rng, 0.05, 1.0);
        const double s = support::uniform(rng), t = support::uniform(rng, 0.05, 1.0);
        const auto mc =
            monte_carlo_cross_moment(q, r, s, t, InputLaw::uniform_square, 400'000, 100 + k);
        REQUIRE(std::abs(mc.mean - relu_cross_moment(q, r, s, t)) <= 4.5 * mc.standard_error);
    }
    CHECK_THROWS_AS(monte_carlo_cross_moment(1, 0, 1, 0, InputLaw::gaussian, 1, 0), DomainError);
    // E[relu(x1)^2] = 1/2 under the standard gaussian
    const auto g = monte_carlo_cross_moment(1, 0, 1, 0, InputLaw::gaussian, 400'000, 5);
    CHECK(std::abs(g.mean - 0.5) <= 4.5 * g.standard_error);
}

TEST_CASE("Example 3 teacher and loss") {
    const TwoLayerTeacher t;
    CHECK(example3_teacher_constant(t) == doctest::Approx(8113.0 / 5184.0).epsilon(1e-14));
    TwoLayerTeacher shortcut;
    shortcut.m = 1.0;
    CHECK(example3_loss(0.0, shortcut) == doctest::Approx(0.424).epsilon(1e-2));
    CHECK(example3_loss(1.0, shortcut) == doctest::Approx(0.561).epsilon(1e-2));
    CHECK(example3_loss(0.0, shortcut) < example3_loss(1.0, shortcut));
    for (double p : {0.0, 0.3, 0.7, 1.0}) {
        CHECK(example3_loss(p, t) >= 0.0);
    }

    TwoLayerTeacher bad;
    bad.a = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    TwoLayerTeacher gauss;
    gauss.input_law = InputLaw::gaussian;
    CHECK_THROWS_AS(example3_loss(0.5, gauss), DomainError);
}

TEST_CASE("Monte Carlo estimates are thread-count independent") {
    const double ps[] = {0.0, 0.5, 1.0};
    TwoLayerTeacher t;
    t.m = 1.0;
    const auto a = monte_carlo_example3_loss(ps, t, 3 * kMonteCarloBlock + 17, 4);
    const auto b = serial::monte_carlo_example3_loss(ps, t, 3 * kMonteCarloBlock + 17, 4);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(a[k].mean == b[k].mean);
        CHECK(a[k].standard_error == b[k].standard_error);
    }
}

TEST_CASE("scalar minimizers") {
    const auto quad = [](double x) { return (x - 0.3) * (x - 0.3); };
    CHECK(golden_section(quad, 0, 1).argmin == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(grid_minimize(quad, 0, 1).argmin == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(grid_minimize([](double) { return 1.0; }, 0, 1).argmin == 0.0);
    CHECK(grid_minimize([](double x) { return -x; }, 0, 1).argmin == 1.0);
    CHECK_THROWS_AS(grid_minimize(quad, 0, 1, 2), DomainError);
    CHECK_THROWS_AS(grid_minimize(quad, 1, 1), DomainError);
    CHECK_THROWS_AS(grid_local_minima(quad, 1, 0), DomainError);
    const auto w = grid_local_minima([](double x) { return std::cos(6 * M_PI * x); }, 0, 1);
    CHECK(w.size() == 3);
}
