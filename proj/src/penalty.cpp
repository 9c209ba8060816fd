#include "permrelax/penalty.hpp"

#include <cmath>

#include "permrelax/kernels.hpp"

namespace permrelax {

void PenaltyConfig::validate() const {
    if (!(lambda >= 0.0)) {
        throw DomainError("penalty lambda must be nonnegative");
    }
    if (!(norm_guard > 0.0 && norm_guard <= 1e-6)) {
        throw DomainError("norm_guard must lie in (0, 1e-6]");
    }
}

double penalty_value(const SquareMatrix& m) {
    const auto row_l1 = kernels::row_abs_sums(m);
    const auto col_l1 = kernels::column_abs_sums(m);
    const auto row_l2 = kernels::row_norms(m);
    const auto col_l2 = kernels::column_norms(m);
    double total = 0.0;
    for (std::size_t k = 0; k < m.n(); ++k) {
        total += (row_l1[k] - row_l2[k]) + (col_l1[k] - col_l2[k]);
    }
    return total;
}

SquareMatrix penalty_subgradient(const SquareMatrix& m, const PenaltyConfig& cfg) {
    cfg.validate();
    const std::size_t n = m.n();
    auto inverse_norms = [&](std::vector<double> norms) {
        for (double& v : norms) {
            v = v < cfg.norm_guard ? 0.0 : 1.0 / v;
        }
        return norms;
    };
    const auto row_inv = inverse_norms(kernels::row_norms(m));
    const auto col_inv = inverse_norms(kernels::column_norms(m));

    SquareMatrix g(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = m(i, j);
            const double sign = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
            g(i, j) = 2.0 * sign - v * row_inv[i] - v * col_inv[j];
        }
    }
    return g;
}

}  // namespace permrelax
