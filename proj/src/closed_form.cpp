#include "permrelax/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace permrelax {

namespace {

void require_unit_interval(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw DomainError("parameter must lie in [0, 1]");
    }
}

double relu(double v) { return v > 0.0 ? v : 0.0; }

double birkhoff_norm(double q) { return std::sqrt(q * q + (1.0 - q) * (1.0 - q)); }

// Moment in the orientation q t >= r s.
double oriented_moment(double q, double r, double s, double t) {
    if (q < r) {
        return 2.0 / 3.0 * (q * s + r * t) + q * q * (q * t - 3.0 * r * s) / (24.0 * r * r) +
               s * s * (3.0 * q * t - r * s) / (24.0 * t * t);
    }
    if (t >= s) {
        return (q * s + r * t) / 3.0 + (q * t + r * s) / 4.0 +
               (r * r / (q * q) + s * s / (t * t)) * (3.0 * q * t - r * s) / 24.0;
    }
    return 2.0 / 3.0 * (q * s + r * t) + r * r * (3.0 * q * t - r * s) / (24.0 * q * q) +
           t * t * (q * t - 3.0 * r * s) / (24.0 * s * s);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Draws the samples of one block and hands each (x1, x2) to visit.
template <typename Visit>
void for_each_block_sample(InputLaw law, std::uint64_t seed, std::size_t block,
                           std::size_t count, Visit&& visit) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(block + 1)));
    if (law == InputLaw::uniform_square) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::size_t k = 0; k < count; ++k) {
            const double x1 = u(rng);
            const double x2 = u(rng);
            visit(x1, x2);
        }
    } else {
        std::normal_distribution<double> g(0.0, 1.0);
        for (std::size_t k = 0; k < count; ++k) {
            const double x1 = g(rng);
            const double x2 = g(rng);
            visit(x1, x2);
        }
    }
}

double law_factor(InputLaw law) { return law == InputLaw::uniform_square ? 4.0 : 1.0; }

struct Moments {
    std::vector<double> sum;
    std::vector<double> sum_sq;
};

std::size_t block_count(std::size_t samples) {
    return (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
}

std::size_t block_size(std::size_t samples, std::size_t block) {
    return std::min(kMonteCarloBlock, samples - block * kMonteCarloBlock);
}

Moments example3_block(std::span<const double> ps, const TwoLayerTeacher& teacher,
                       std::size_t samples, std::uint64_t seed, std::size_t block) {
    const double m = teacher.m;
    const double a = teacher.a + m, b = teacher.b, c = teacher.c, d = teacher.d + m;
    const double factor = law_factor(teacher.input_law);
    Moments out{std::vector<double>(ps.size(), 0.0), std::vector<double>(ps.size(), 0.0)};
    for_each_block_sample(teacher.input_law, seed, block, block_size(samples, block),
                          [&](double x1, double x2) {
                              const double target = relu(a * x1 + b * x2) + relu(c * x1 + d * x2);
                              for (std::size_t k = 0; k < ps.size(); ++k) {
                                  const double p = ps[k];
                                  const double student = relu((m + p) * x1 + (1.0 - p) * x2) +
                                                         relu((1.0 - p) * x1 + (m + p) * x2);
                                  const double diff = student - target;
                                  const double v = factor * diff * diff;
                                  out.sum[k] += v;
                                  out.sum_sq[k] += v * v;
                              }
                          });
    return out;
}

std::vector<McEstimate> finish(const std::vector<Moments>& blocks, std::size_t width,
                               std::size_t samples) {
    std::vector<McEstimate> out(width);
    const double count = static_cast<double>(samples);
    for (std::size_t k = 0; k < width; ++k) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& b : blocks) {
            sum += b.sum[k];
            sum_sq += b.sum_sq[k];
        }
        const double mean = sum / count;
        const double variance = std::max(0.0, (sum_sq / count - mean * mean) * count / (count - 1.0));
        out[k] = {mean, std::sqrt(variance / count)};
    }
    return out;
}

void require_samples(std::size_t samples) {
    if (samples < 2) {
        throw DomainError("Monte Carlo needs at least two samples");
    }
}

ScalarMinimum refine(const ScalarFunction& f, double lo, double hi, double h, double x,
                     double fx) {
    const double left = std::max(lo, x - h);
    const double right = std::min(hi, x + h);
    const ScalarMinimum g = golden_section(f, left, right);
    if (g.value < fx) {
        return g;
    }
    return {x, fx};
}

}  // namespace

BirkhoffLine2::BirkhoffLine2(double q_) : q(q_) { require_unit_interval(q); }

SquareMatrix BirkhoffLine2::matrix() const { return SquareMatrix{{q, 1.0 - q}, {1.0 - q, q}}; }

double example1_F(double q, double lambda) {
    require_unit_interval(q);
    return 6.0 * q * q - 8.0 * q + 2.0 - 4.0 * lambda * birkhoff_norm(q);
}

double example2_F(double q, double lambda) {
    require_unit_interval(q);
    const double u = birkhoff_norm(q);
    return 4.0 * u * u - 4.0 * lambda * u;
}

double relu_cross_moment(double q, double r, double s, double t) {
    if (!(q >= 0.0 && r >= 0.0 && s >= 0.0 && t >= 0.0) || !(q + r > 0.0) || !(s + t > 0.0)) {
        throw DomainError("relu_cross_moment needs nonnegative weights with q+r > 0 and s+t > 0");
    }
    if (q * t >= r * s) {
        return oriented_moment(q, r, s, t);
    }
    return oriented_moment(s, t, q, r);
}

void TwoLayerTeacher::validate() const {
    if (!(m >= 0.0 && a >= 0.0 && b >= 0.0 && c >= 0.0 && d >= 0.0)) {
        throw DomainError("teacher weights and m must be nonnegative");
    }
    if (!(a + m + b > 0.0) || !(c + d + m > 0.0)) {
        throw DomainError("teacher rows must not vanish");
    }
}

double example3_teacher_constant(const TwoLayerTeacher& teacher) {
    teacher.validate();
    const double a = teacher.a + teacher.m, d = teacher.d + teacher.m;
    return relu_cross_moment(a, teacher.b, a, teacher.b) +
           relu_cross_moment(teacher.c, d, teacher.c, d) +
           2.0 * relu_cross_moment(a, teacher.b, teacher.c, d);
}

double example3_loss(double p, const TwoLayerTeacher& teacher) {
    require_unit_interval(p);
    teacher.validate();
    if (teacher.input_law != InputLaw::uniform_square) {
        throw DomainError("closed form exists for the uniform law only");
    }
    const double m = teacher.m;
    const double a = teacher.a + m, b = teacher.b, c = teacher.c, d = teacher.d + m;
    const double u1 = m + p, u2 = 1.0 - p;  // first student row
    const double v1 = 1.0 - p, v2 = m + p;  // second student row
    const double squares = relu_cross_moment(u1, u2, u1, u2) + relu_cross_moment(v1, v2, v1, v2);
    const double cross = relu_cross_moment(u1, u2, v1, v2);
    const double g_ab = relu_cross_moment(u1, u2, a, b) + relu_cross_moment(v1, v2, a, b);
    const double g_cd = relu_cross_moment(u1, u2, c, d) + relu_cross_moment(v1, v2, c, d);
    return squares + 2.0 * cross - 2.0 * g_ab - 2.0 * g_cd + example3_teacher_constant(teacher);
}

double example3_F(double p, const TwoLayerTeacher& teacher, double lambda) {
    return example3_loss(p, teacher) - 4.0 * lambda * birkhoff_norm(p);
}

UnknownExample::UnknownExample(int example)
    : Error("unknown example " + std::to_string(example) + " (expected 1, 2 or 3)") {}

ScalarFunction example_curve(int example, double lambda, double m) {
    switch (example) {
        case 1:
            return [lambda](double q) { return example1_F(q, lambda); };
        case 2:
            return [lambda](double q) { return example2_F(q, lambda); };
        case 3: {
            TwoLayerTeacher teacher;
            teacher.m = m;
            teacher.validate();
            return [teacher, lambda](double p) { return example3_F(p, teacher, lambda); };
        }
        default:
            throw UnknownExample(example);
    }
}

McEstimate monte_carlo_cross_moment(double q, double r, double s, double t, InputLaw law,
                                    std::size_t samples, std::uint64_t seed) {
    require_samples(samples);
    const double factor = law_factor(law);
    const std::size_t blocks = block_count(samples);
    std::vector<Moments> parts(blocks);
    const auto count = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bi = 0; bi < count; ++bi) {
        const auto block = static_cast<std::size_t>(bi);
        Moments mo{{0.0}, {0.0}};
        for_each_block_sample(law, seed, block, block_size(samples, block),
                              [&](double x1, double x2) {
                                  const double v =
                                      factor * relu(q * x1 + r * x2) * relu(s * x1 + t * x2);
                                  mo.sum[0] += v;
                                  mo.sum_sq[0] += v * v;
                              });
        parts[block] = std::move(mo);
    }
    return finish(parts, 1, samples).front();
}

std::vector<McEstimate> monte_carlo_example3_loss(std::span<const double> ps,
                                                  const TwoLayerTeacher& teacher,
                                                  std::size_t samples, std::uint64_t seed) {
    require_samples(samples);
    teacher.validate();
    const std::size_t blocks = block_count(samples);
    std::vector<Moments> parts(blocks);
    const auto count = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bi = 0; bi < count; ++bi) {
        const auto block = static_cast<std::size_t>(bi);
        parts[block] = example3_block(ps, teacher, samples, seed, block);
    }
    return finish(parts, ps.size(), samples);
}

namespace serial {

std::vector<McEstimate> monte_carlo_example3_loss(std::span<const double> ps,
                                                  const TwoLayerTeacher& teacher,
                                                  std::size_t samples, std::uint64_t seed) {
    require_samples(samples);
    teacher.validate();
    const std::size_t blocks = block_count(samples);
    std::vector<Moments> parts;
    parts.reserve(blocks);
    for (std::size_t block = 0; block < blocks; ++block) {
        parts.push_back(example3_block(ps, teacher, samples, seed, block));
    }
    return finish(parts, ps.size(), samples);
}

}  // namespace serial

ScalarMinimum golden_section(const ScalarFunction& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

ScalarMinimum grid_minimize(const ScalarFunction& f, double lo, double hi, std::size_t points) {
    if (points < 3 || !(hi > lo)) {
        throw DomainError("grid_minimize needs at least 3 points on a nonempty interval");
    }
    const double h = (hi - lo) / static_cast<double>(points - 1);
    std::size_t best = 0;
    double best_value = f(lo);
    for (std::size_t k = 1; k < points; ++k) {
        const double x = k + 1 == points ? hi : lo + h * static_cast<double>(k);
        const double v = f(x);
        if (v < best_value) {
            best = k;
            best_value = v;
        }
    }
    const double x = best + 1 == points ? hi : lo + h * static_cast<double>(best);
    return refine(f, lo, hi, h, x, best_value);
}

std::vector<ScalarMinimum> grid_local_minima(const ScalarFunction& f, double lo, double hi,
                                             std::size_t points) {
    if (points < 3 || !(hi > lo)) {
        throw DomainError("grid_local_minima needs at least 3 points on a nonempty interval");
    }
    const double h = (hi - lo) / static_cast<double>(points - 1);
    std::vector<double> xs(points), vs(points);
    for (std::size_t k = 0; k < points; ++k) {
        xs[k] = k + 1 == points ? hi : lo + h * static_cast<double>(k);
        vs[k] = f(xs[k]);
    }
    std::vector<ScalarMinimum> minima;
    for (std::size_t k = 0; k < points; ++k) {
        const bool left_ok = k == 0 || vs[k] <= vs[k - 1];
        const bool right_ok = k + 1 == points || vs[k] < vs[k + 1];
        if (left_ok && right_ok) {
            minima.push_back(refine(f, lo, hi, h, xs[k], vs[k]));
        }
    }
    return minima;
}

}  // namespace permrelax
