#include "permrelax/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace permrelax {

Permutation random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), std::size_t{0});
    std::shuffle(map.begin(), map.end(), rng);
    return Permutation(std::move(map));
}

SquareMatrix random_uniform_matrix(std::size_t n, Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    SquareMatrix m(n);
    for (double& v : m.values()) {
        v = u(rng);
    }
    return m;
}

SquareMatrix random_positive_matrix(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    SquareMatrix m(n);
    for (double& v : m.values()) {
        do {
            v = std::abs(g(rng));
        } while (v == 0.0);
    }
    return m;
}

SquareMatrix random_doubly_stochastic(std::size_t n, Rng& rng, std::size_t terms) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> weights(terms);
    for (double& w : weights) {
        w = u(rng);
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    SquareMatrix m(n);
    for (double w : weights) {
        SquareMatrix p = permutation_to_matrix(random_permutation(n, rng));
        p *= w / total;
        m += p;
    }
    return m;
}

}  // namespace permrelax
