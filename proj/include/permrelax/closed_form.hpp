#pragma once

// One-parameter landscapes on the 2x2 Birkhoff line Q(q) = [[q, 1-q], [1-q, q]]:
// the two graph-matching examples and the two-layer ReLU teacher/student loss.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "permrelax/error.hpp"
#include "permrelax/matrix.hpp"

namespace permrelax {

using ScalarFunction = std::function<double(double)>;

struct BirkhoffLine2 {
    double q = 0.0;

    /// DomainError unless q in [0, 1].
    explicit BirkhoffLine2(double q);
    SquareMatrix matrix() const;
};

/// 6 q^2 - 8 q + 2 - 4 lambda sqrt(q^2 + (1-q)^2); DomainError outside [0, 1].
double example1_F(double q, double lambda);

/// 4 [q^2 + (1-q)^2] - 4 lambda sqrt(q^2 + (1-q)^2); F(0) = F(1) = 4 - 4 lambda.
double example2_F(double q, double lambda);

/// Integral over [-1,1]^2 of relu(q x1 + r x2) relu(s x1 + t x2) dx.
///
/// This is 4x the expectation under the uniform law; the closed forms
/// (three branches on q < r, t < s, and the middle case) are stated in this
/// unnormalized convention, as is every uniform-law moment in this module.
/// Arguments must be nonnegative with q + r > 0 and s + t > 0; the pair is
/// swapped when q t < r s.
double relu_cross_moment(double q, double r, double s, double t);

enum class InputLaw {
    /// x uniform on [-1,1]^2, moments unnormalized (see relu_cross_moment)
    uniform_square,
    /// x ~ N(0, I_2); Monte Carlo only
    gaussian,
};

/// Teacher weights W* = [[a, b], [c, d]] and shortcut strength m.
/// Both student and teacher use f_m(x, W) = ||relu((m I + W) x)||_1.
struct TwoLayerTeacher {
    double m = 0.0;
    double a = 1.0 / 3.0;
    double b = 2.0 / 3.0;
    double c = 1.0 / 4.0;
    double d = 3.0 / 4.0;
    InputLaw input_law = InputLaw::uniform_square;

    void validate() const;
};

/// The teacher-only term E[relu(a' x1 + b' x2) + relu(c' x1 + d' x2)]^2 with
/// a' = a + m, d' = d + m. Equals 8113/5184 for the default teacher at m = 0.
double example3_teacher_constant(const TwoLayerTeacher& teacher);

/// l_m(p) = L(W(p)) for W(p) on the Birkhoff line; uniform law only.
double example3_loss(double p, const TwoLayerTeacher& teacher);

/// l_m(p) - 4 lambda sqrt(p^2 + (1-p)^2)
double example3_F(double p, const TwoLayerTeacher& teacher, double lambda);

class UnknownExample : public Error {
public:
    explicit UnknownExample(int example);
};

/// F of example 1, 2 or 3 as a function of the line parameter; m is the
/// shortcut strength of the default teacher and only affects example 3.
ScalarFunction example_curve(int example, double lambda, double m = 0.0);

struct McEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Samples are drawn in fixed-size blocks, each from its own generator
/// seeded by (seed, block); results do not depend on the thread count.
inline constexpr std::size_t kMonteCarloBlock = 1 << 16;

/// Monte Carlo estimate of the moment computed by relu_cross_moment (uniform
/// law, including the area factor 4) or of the plain expectation (gaussian).
McEstimate monte_carlo_cross_moment(double q, double r, double s, double t, InputLaw law,
                                    std::size_t samples, std::uint64_t seed);

/// Monte Carlo estimates of L(W(p)) at every p, sharing one sample stream.
std::vector<McEstimate> monte_carlo_example3_loss(std::span<const double> ps,
                                                  const TwoLayerTeacher& teacher,
                                                  std::size_t samples, std::uint64_t seed);

namespace serial {
std::vector<McEstimate> monte_carlo_example3_loss(std::span<const double> ps,
                                                  const TwoLayerTeacher& teacher,
                                                  std::size_t samples, std::uint64_t seed);
}

struct ScalarMinimum {
    double argmin = 0.0;
    double value = 0.0;
};

/// Golden-section search on [lo, hi] down to an interval of width tol.
ScalarMinimum golden_section(const ScalarFunction& f, double lo, double hi, double tol = 1e-9);

/// Uniform grid of `points` samples (lowest index wins ties), then the best
/// cell is refined by golden-section search. The grid point is kept unless
/// the refinement is strictly lower, so endpoint minima stay exact.
/// DomainError if points < 3 or hi <= lo.
ScalarMinimum grid_minimize(const ScalarFunction& f, double lo, double hi,
                            std::size_t points = 2001);

/// Every grid local minimum, each refined as in grid_minimize, in ascending order.
std::vector<ScalarMinimum> grid_local_minima(const ScalarFunction& f, double lo, double hi,
                                             std::size_t points = 2001);

}  // namespace permrelax
