#include "permrelax/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "permrelax/optimizer.hpp"
#include "permrelax/penalty.hpp"
#include "permrelax/projection.hpp"
#include "permrelax/qap.hpp"
#include "permrelax/rounding.hpp"
#include "permrelax/sampling.hpp"
#include "permrelax/shuffle_demo.hpp"

namespace permrelax {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

PropertyCheck check(std::string name, bool passed, std::string detail) {
    return {std::move(name), passed, std::move(detail)};
}

// Single-matrix wrapper so the penalty runs through the shared FD harness.
class PenaltyProblem final : public ObjectiveProblem {
public:
    explicit PenaltyProblem(std::size_t n) : n_(n) {}
    std::vector<std::size_t> dimensions() const override { return {n_}; }
    double loss(std::span<const double>, std::span<const SquareMatrix> ms) const override {
        return penalty_value(ms[0]);
    }
    Gradient loss_gradient(std::span<const double>,
                           std::span<const SquareMatrix> ms) const override {
        return {{}, {penalty_subgradient(ms[0])}};
    }

private:
    std::size_t n_;
};

std::vector<Permutation> all_permutations(std::size_t n) {
    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), std::size_t{0});
    std::vector<Permutation> out;
    do {
        out.emplace_back(map);
    } while (std::next_permutation(map.begin(), map.end()));
    return out;
}

double exhaustive_lap_score(const SquareMatrix& m) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : all_permutations(m.n())) {
        best = std::max(best, assignment_score(m, p));
    }
    return best;
}

SuiteReport theorem1(std::uint64_t seed) {
    Rng rng(seed);
    SuiteReport report{"theorem1", {}};

    double worst_perm = 0.0;
    std::uniform_int_distribution<std::size_t> dim(2, 64);
    for (int k = 0; k < 200; ++k) {
        const auto p = random_permutation(dim(rng), rng);
        worst_perm = std::max(worst_perm, std::abs(penalty_value(permutation_to_matrix(p))));
    }
    for (std::size_t n : {2u, 3u}) {
        for (const auto& p : all_permutations(n)) {
            worst_perm = std::max(worst_perm, std::abs(penalty_value(permutation_to_matrix(p))));
        }
    }
    report.checks.push_back(check("permutations have zero penalty", worst_perm <= 1e-12,
                                  "max |P| = " + fmt(worst_perm)));

    double smallest_mix = std::numeric_limits<double>::infinity();
    bool rejected = true;
    std::uniform_real_distribution<double> theta(0.01, 0.99);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = dim(rng);
        const auto p1 = random_permutation(n, rng);
        auto p2 = random_permutation(n, rng);
        while (p2 == p1) {
            p2 = random_permutation(n, rng);
        }
        const double t = theta(rng);
        SquareMatrix m = permutation_to_matrix(p1);
        m *= t;
        SquareMatrix other = permutation_to_matrix(p2);
        other *= 1.0 - t;
        m += other;
        smallest_mix = std::min(smallest_mix, penalty_value(m));
        try {
            matrix_to_permutation(m);
            rejected = false;
        } catch (const NotAPermutation&) {
        }
    }
    report.checks.push_back(check("strict convex combinations have positive penalty",
                                  smallest_mix > 1e-6 && rejected,
                                  "min P = " + fmt(smallest_mix)));

    double most_negative = 0.0;
    for (int k = 0; k < 200; ++k) {
        const auto m = random_uniform_matrix(dim(rng) % 16 + 1, rng, -1.0, 1.0);
        most_negative = std::min(most_negative, penalty_value(m));
    }
    report.checks.push_back(check("penalty is nonnegative", most_negative >= -1e-12,
                                  "min P = " + fmt(most_negative)));
    return report;
}

SuiteReport theorem2(std::uint64_t seed) {
    Rng rng(seed);
    SuiteReport report{"theorem2", {}};
    double worst_constant = 0.0;
    double worst_violation_ratio = 0.0;
    std::size_t recovered = 0, trials = 0;
    for (std::size_t n : {4u, 8u, 16u}) {
        for (double eps : {1e-3, 1e-2, 1e-1}) {
            for (int k = 0; k < 100; ++k) {
                const auto p_star = random_permutation(n, rng);
                SquareMatrix e = random_positive_matrix(n, rng);
                e *= 1.0 / frobenius_norm(e);
                SquareMatrix m = permutation_to_matrix(p_star);
                e *= eps;
                m += e;
                m = ras_pass(std::move(m));
                worst_constant = std::max(worst_constant, penalty_value(m) / eps);
                worst_violation_ratio =
                    std::max(worst_violation_ratio, constraint_violation(m) / eps);
                recovered += nearest_permutation_lap(m) == p_star ? 1 : 0;
                ++trials;
            }
        }
    }
    report.checks.push_back(check("penalty is O(eps) near a permutation",
                                  worst_constant <= 4.0 * 16.0,
                                  "C = max P/eps = " + fmt(worst_constant)));
    report.checks.push_back(check("constraints hold to O(eps)", worst_violation_ratio <= 2.0,
                                  "max violation/eps = " + fmt(worst_violation_ratio)));
    report.checks.push_back(check("nearest permutation recovers P*", recovered == trials,
                                  std::to_string(recovered) + "/" + std::to_string(trials)));
    return report;
}

SuiteReport gradients(std::uint64_t seed) {
    Rng rng(seed);
    SuiteReport report{"gradients", {}};

    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 2 + k % 7;
        SquareMatrix m = random_uniform_matrix(n, rng, 0.05, 1.0);
        const PenaltyProblem problem(n);
        worst = std::max(worst, check_gradient(problem, {}, {&m, 1}).max_rel_error);
    }
    report.checks.push_back(
        check("penalty subgradient vs finite differences", worst <= 1e-5, "max rel " + fmt(worst)));

    worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 2 + k % 5;
        const QapProblem problem(
            QapInstance(random_uniform_matrix(n, rng), random_uniform_matrix(n, rng)));
        SquareMatrix q = random_uniform_matrix(n, rng);
        worst = std::max(worst, check_gradient(problem, {}, {&q, 1}).max_rel_error);
    }
    report.checks.push_back(
        check("gm gradient vs finite differences", worst <= 1e-5, "max rel " + fmt(worst)));

    worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 2 + k % 7;
        const auto gen = generate_task({n, 20 * n, 0.1, 0}, seed + 1000 + k);
        const ShuffleProblem problem(gen.task, gen.data);
        SquareMatrix m = random_uniform_matrix(n, rng);
        worst = std::max(worst, check_gradient(problem, {}, {&m, 1}).max_rel_error);
    }
    report.checks.push_back(
        check("shuffle gradient vs finite differences", worst <= 1e-5, "max rel " + fmt(worst)));
    return report;
}

SuiteReport sinkhorn(std::uint64_t seed) {
    Rng rng(seed);
    SuiteReport report{"sinkhorn", {}};
    std::uniform_int_distribution<std::size_t> dim(2, 60);
    std::size_t converged = 0;
    std::size_t max_iterations = 0;
    double worst_row = 0.0;
    bool monotone = true;
    for (int k = 0; k < 200; ++k) {
        const auto m = random_positive_matrix(dim(rng), rng);
        try {
            const auto result = iterate_to_tolerance(m, {1, 1e-8, 10000});
            converged += constraint_violation(result.matrix) <= 1e-8 ? 1 : 0;
            max_iterations = std::max(max_iterations, result.iterations);
        } catch (const NoConvergence&) {
        }
        SquareMatrix x = m;
        double previous = std::numeric_limits<double>::infinity();
        for (int pass = 0; pass < 20; ++pass) {
            x = ras_pass(std::move(x));
            for (std::size_t i = 0; i < x.n(); ++i) {
                double s = 0.0;
                for (double v : x.row(i)) {
                    s += v;
                }
                worst_row = std::max(worst_row, std::abs(s - 1.0));
            }
            const double violation = constraint_violation(x);
            monotone = monotone && violation <= previous + 1e-15;
            previous = violation;
        }
    }
    report.checks.push_back(check("iterate_to_tolerance reaches 1e-8", converged == 200,
                                  std::to_string(converged) + "/200, max iterations " +
                                      std::to_string(max_iterations)));
    report.checks.push_back(
        check("ras_pass rows sum to one", worst_row <= 1e-12, "max |row-1| = " + fmt(worst_row)));
    report.checks.push_back(check("violation is monotone under RAS", monotone, ""));

    bool fixed = true;
    for (int k = 0; k < 50; ++k) {
        const auto p = permutation_to_matrix(random_permutation(dim(rng), rng));
        fixed = fixed && ras_pass(threshold_nonnegative(p)) == p &&
                iterate_to_tolerance(p).iterations == 0;
    }
    report.checks.push_back(check("permutation matrices are fixed points", fixed, ""));
    return report;
}

SuiteReport rounding(std::uint64_t seed) {
    Rng rng(seed);
    SuiteReport report{"rounding", {}};
    std::size_t agree = 0;
    for (int k = 0; k < 500; ++k) {
        const std::size_t n = 1 + k % 7;
        const auto m = random_uniform_matrix(n, rng);
        const double lap = assignment_score(m, nearest_permutation_lap(m));
        agree += std::abs(lap - exhaustive_lap_score(m)) <= 1e-12 ? 1 : 0;
    }
    report.checks.push_back(check("LAP matches exhaustive search (n <= 7)", agree == 500,
                                  std::to_string(agree) + "/500"));

    bool idempotent = true;
    for (int k = 0; k < 100; ++k) {
        const auto p = random_permutation(1 + k % 40, rng);
        const auto pm = permutation_to_matrix(p);
        idempotent = idempotent && nearest_permutation_lap(pm) == p && round_argmax(pm) == p;
    }
    report.checks.push_back(check("rounding a permutation is the identity", idempotent, ""));

    std::size_t dominant_agree = 0;
    for (int k = 0; k < 100; ++k) {
        const auto p = random_permutation(16, rng);
        SquareMatrix m = permutation_to_matrix(p);
        SquareMatrix e = random_positive_matrix(16, rng);
        e *= 0.05 / frobenius_norm(e);
        m += e;
        m = ras_pass(threshold_nonnegative(std::move(m)));
        const auto lap = nearest_permutation_lap(m);
        const auto arg = round_argmax(m);
        dominant_agree += (lap == p && arg == p) ? 1 : 0;
    }
    report.checks.push_back(check("argmax rounding agrees near a permutation",
                                  dominant_agree == 100,
                                  std::to_string(dominant_agree) + "/100"));
    return report;
}

}  // namespace

bool SuiteReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

UnknownSuite::UnknownSuite(const std::string& name) : Error("unknown verify suite: " + name) {}

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names{"theorem1", "theorem2", "gradients", "sinkhorn",
                                                "rounding"};
    return names;
}

SuiteReport run_verify_suite(std::string_view suite, std::uint64_t seed) {
    if (suite == "theorem1") return theorem1(seed);
    if (suite == "theorem2") return theorem2(seed);
    if (suite == "gradients") return gradients(seed);
    if (suite == "sinkhorn") return sinkhorn(seed);
    if (suite == "rounding") return rounding(seed);
    throw UnknownSuite(std::string(suite));
}

void print_report(std::ostream& out, const SuiteReport& report) {
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << report.suite << ": " << c.name;
        if (!c.detail.empty()) {
            out << " (" << c.detail << ")";
        }
        out << '\n';
    }
}

}  // namespace permrelax
