#include "permrelax/qap.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "permrelax/kernels.hpp"
#include "permrelax/rounding.hpp"

namespace permrelax {

namespace {

void require_same(const QapInstance& inst, const SquareMatrix& q) {
    if (q.n() != inst.n()) {
        throw DimensionMismatch(inst.n(), q.n());
    }
}

SquareMatrix residual(const QapInstance& inst, const SquareMatrix& q) {
    return SquareMatrix(kernels::matmul(inst.a, q) - kernels::matmul(q, inst.b));
}

double squared_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.values()) {
        s += v * v;
    }
    return s;
}

// Objective of permutation p in index form; O(n^2).
double permutation_objective(const QapInstance& inst, const std::vector<std::size_t>& p) {
    const std::size_t n = inst.n();
    double s = 0.0;
    if (inst.kind == QapKind::graph_matching) {
        // ||A Q - Q B||_F = ||A - Q B Q^T||_F with (Q B Q^T)_ij = B_{p(i) p(j)}
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double d = inst.a(i, j) - inst.b(p[i], p[j]);
                s += d * d;
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                s += inst.a(i, j) * inst.b(p[i], p[j]);
            }
        }
    }
    return s;
}

struct Best {
    std::vector<std::size_t> map;
    double value = std::numeric_limits<double>::infinity();
};

// All permutations with p[0] == first, in lexicographic order.
Best search_branch(const QapInstance& inst, std::size_t first) {
    const std::size_t n = inst.n();
    std::vector<std::size_t> p;
    p.push_back(first);
    for (std::size_t k = 0; k < n; ++k) {
        if (k != first) {
            p.push_back(k);
        }
    }
    Best best;
    do {
        const double v = permutation_objective(inst, p);
        if (v < best.value) {
            best.value = v;
            best.map = p;
        }
    } while (std::next_permutation(p.begin() + 1, p.end()));
    return best;
}

OracleSolution reduce_branches(const std::vector<Best>& branches) {
    const Best* best = &branches.front();
    for (const Best& b : branches) {
        if (b.value < best->value) {
            best = &b;
        }
    }
    return {Permutation(best->map), best->value};
}

void require_oracle_size(const QapInstance& inst) {
    if (inst.n() > kBruteForceLimit) {
        throw TooLarge(inst.n(), kBruteForceLimit);
    }
    if (inst.n() == 0) {
        throw DomainError("empty instance");
    }
}

std::vector<std::uint64_t> consecutive_seeds(std::uint64_t first, std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    std::iota(seeds.begin(), seeds.end(), first);
    return seeds;
}

}  // namespace

QapInstance::QapInstance(SquareMatrix a_, SquareMatrix b_, QapKind kind_)
    : a(std::move(a_)), b(std::move(b_)), kind(kind_) {
    if (a.n() != b.n()) {
        throw DimensionMismatch(a.n(), b.n());
    }
}

double gm_objective(const QapInstance& inst, const SquareMatrix& q) {
    require_same(inst, q);
    return squared_norm(residual(inst, q));
}

SquareMatrix gm_gradient(const QapInstance& inst, const SquareMatrix& q) {
    require_same(inst, q);
    const SquareMatrix r = residual(inst, q);
    SquareMatrix g(kernels::matmul_tn(inst.a, r) - kernels::matmul_nt(r, inst.b));
    g *= 2.0;
    return g;
}

double qap_trace_objective(const QapInstance& inst, const SquareMatrix& q) {
    require_same(inst, q);
    // trace(A Q B^T Q^T) = sum_ij A_ij (Q B^T Q^T)_ji
    const Matrix qbt = kernels::matmul_nt(q, inst.b);
    const Matrix inner = kernels::matmul_nt(qbt, q);
    double s = 0.0;
    for (std::size_t i = 0; i < inst.n(); ++i) {
        for (std::size_t j = 0; j < inst.n(); ++j) {
            s += inst.a(i, j) * inner(j, i);
        }
    }
    return s;
}

SquareMatrix qap_trace_gradient(const QapInstance& inst, const SquareMatrix& q) {
    require_same(inst, q);
    const Matrix atqb = kernels::matmul(kernels::matmul_tn(inst.a, q), inst.b);
    const Matrix aqbt = kernels::matmul_nt(kernels::matmul(inst.a, q), inst.b);
    return SquareMatrix(atqb + aqbt);
}

double qap_objective(const QapInstance& inst, const SquareMatrix& q) {
    return inst.kind == QapKind::graph_matching ? gm_objective(inst, q)
                                                : qap_trace_objective(inst, q);
}

double qap_objective(const QapInstance& inst, const Permutation& p) {
    if (p.n() != inst.n()) {
        throw DimensionMismatch(inst.n(), p.n());
    }
    return permutation_objective(inst, p.map());
}

double QapProblem::loss(std::span<const double>, std::span<const SquareMatrix> matrices) const {
    return qap_objective(inst_, matrices[0]);
}

Gradient QapProblem::loss_gradient(std::span<const double>,
                                   std::span<const SquareMatrix> matrices) const {
    Gradient g;
    g.matrices.push_back(inst_.kind == QapKind::graph_matching
                             ? gm_gradient(inst_, matrices[0])
                             : qap_trace_gradient(inst_, matrices[0]));
    return g;
}

double spectral_norm(const SquareMatrix& m) {
    const std::size_t n = m.n();
    if (n == 0) {
        return 0.0;
    }
    Matrix v(n, 1, 1.0 / std::sqrt(static_cast<double>(n)));
    double sigma_sq = 0.0;
    for (int it = 0; it < 200; ++it) {
        Matrix w = kernels::matmul_tn(m, kernels::matmul(m, v));
        const double norm = frobenius_norm(w);
        if (norm == 0.0) {
            return 0.0;
        }
        w *= 1.0 / norm;
        const double change = std::abs(norm - sigma_sq);
        sigma_sq = norm;
        v = std::move(w);
        if (change <= 1e-12 * norm) {
            break;
        }
    }
    return std::sqrt(sigma_sq);
}

OptimizerConfig default_qap_config(const QapInstance& inst) {
    const double na = spectral_norm(inst.a);
    const double nb = spectral_norm(inst.b);
    // ||grad f(Q1) - grad f(Q2)|| <= 2 (||A|| + ||B||)^2 ||Q1 - Q2|| for GM,
    // 2 ||A|| ||B|| for the trace form.
    const double lipschitz = inst.kind == QapKind::graph_matching ? 2.0 * (na + nb) * (na + nb)
                                                                  : 2.0 * na * nb;
    OptimizerConfig cfg;
    cfg.learning_rate = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
    cfg.total_iterations = 3000;
    cfg.gradient_mode = GradientMode::tangent;
    return cfg;
}

double default_qap_lambda(const QapInstance& inst) {
    const double na = spectral_norm(inst.a);
    const double nb = spectral_norm(inst.b);
    return 0.1 * (na * na + nb * nb);
}

RelaxedSolution solve_convex_relaxed(const QapInstance& inst, const OptimizerConfig& cfg,
                                     std::size_t restarts) {
    if (inst.kind != QapKind::graph_matching) {
        throw DomainError("the convex relaxation is defined for graph matching only");
    }
    OptimizerConfig local = cfg;
    local.lambda = 0.0;
    const QapProblem problem(inst);
    const auto seeds = consecutive_seeds(cfg.seed, std::max<std::size_t>(1, restarts));
    const auto outcomes = run_restarts(problem, local, seeds);

    std::optional<RelaxedSolution> best;
    for (const auto& o : outcomes) {
        if (!o.result) {
            continue;
        }
        if (!best || o.result->final_loss < best->objective) {
            best = RelaxedSolution{o.result->relaxed_matrices[0], o.result->final_loss, o.seed};
        }
    }
    if (!best) {
        throw RunFailure("every restart failed: " + outcomes.front().failure, 0, {});
    }
    return *best;
}

Permutation swap_descent(const QapInstance& inst, Permutation p) {
    if (p.n() != inst.n()) {
        throw DimensionMismatch(inst.n(), p.n());
    }
    std::vector<std::size_t> map = p.map();
    double best = permutation_objective(inst, map);
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < map.size() && !improved; ++i) {
            for (std::size_t j = i + 1; j < map.size() && !improved; ++j) {
                std::swap(map[i], map[j]);
                const double v = permutation_objective(inst, map);
                if (v < best - 1e-12 * std::max(1.0, std::abs(best))) {
                    best = v;
                    improved = true;
                } else {
                    std::swap(map[i], map[j]);
                }
            }
        }
    }
    return Permutation(std::move(map));
}

PenalizedSolution solve_penalized(const QapInstance& inst, double lambda,
                                  const OptimizerConfig& cfg, std::size_t restarts,
                                  Polish polish) {
    OptimizerConfig local = cfg;
    local.lambda = lambda;
    const QapProblem problem(inst);
    const auto seeds = consecutive_seeds(cfg.seed, std::max<std::size_t>(1, restarts));
    const auto outcomes = run_restarts(problem, local, seeds);

    std::optional<PenalizedSolution> best;
    for (const auto& o : outcomes) {
        if (!o.result) {
            continue;
        }
        const OptimizationResult& r = *o.result;
        Permutation p = polish == Polish::swap_descent ? swap_descent(inst, r.rounded[0])
                                                       : r.rounded[0];
        const double objective = qap_objective(inst, p);
        if (!best || objective < best->objective) {
            best = PenalizedSolution{std::move(p),          objective,       r.rounded_loss,
                                     r.relaxed_matrices[0], r.final_penalty, o.seed};
        }
    }
    if (!best) {
        throw RunFailure("every restart failed: " + outcomes.front().failure, 0, {});
    }
    return *std::move(best);
}

OracleSolution brute_force_oracle(const QapInstance& inst) {
    require_oracle_size(inst);
    const std::size_t n = inst.n();
    std::vector<Best> branches(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) if (n >= 8)
    for (std::ptrdiff_t f = 0; f < count; ++f) {
        branches[static_cast<std::size_t>(f)] = search_branch(inst, static_cast<std::size_t>(f));
    }
    return reduce_branches(branches);
}

namespace serial {

OracleSolution brute_force_oracle(const QapInstance& inst) {
    require_oracle_size(inst);
    std::vector<Best> branches;
    for (std::size_t f = 0; f < inst.n(); ++f) {
        branches.push_back(search_branch(inst, f));
    }
    return reduce_branches(branches);
}

}  // namespace serial

QapInstance read_qap_instance(std::istream& in, QapKind kind) {
    long long n = 0;
    if (!(in >> n) || n <= 0) {
        throw ParseError("expected a positive instance dimension");
    }
    const auto dim = static_cast<std::size_t>(n);
    SquareMatrix a(dim), b(dim);
    for (SquareMatrix* m : {&a, &b}) {
        for (double& v : m->values()) {
            if (!(in >> v)) {
                throw ParseError("instance has fewer than 2*n*n entries");
            }
        }
    }
    double extra = 0.0;
    if (in >> extra) {
        throw ParseError("trailing data after matrix B");
    }
    if (!a.all_finite() || !b.all_finite()) {
        throw ParseError("instance entries must be finite");
    }
    return QapInstance(std::move(a), std::move(b), kind);
}

void write_qap_instance(std::ostream& out, const QapInstance& inst) {
    const auto old_precision = out.precision(17);
    out << inst.n() << '\n';
    for (const SquareMatrix* m : {&inst.a, &inst.b}) {
        if (m == &inst.b) {
            out << '\n';
        }
        for (std::size_t i = 0; i < m->n(); ++i) {
            for (std::size_t j = 0; j < m->n(); ++j) {
                out << (j ? " " : "") << (*m)(i, j);
            }
            out << '\n';
        }
    }
    out.precision(old_precision);
}

}  // namespace permrelax
