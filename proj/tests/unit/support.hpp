#pragma once

// Hand-rolled generators for the property tests.

#include <cstdint>
#include <random>

#include "permrelax/matrix.hpp"
#include "permrelax/sampling.hpp"

namespace support {

using permrelax::Rng;

inline std::size_t dim(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline permrelax::SquareMatrix gaussian(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    permrelax::SquareMatrix m(n);
    for (double& v : m.values()) {
        v = g(rng);
    }
    return m;
}

inline double row_sum(const permrelax::Matrix& m, std::size_t i) {
    double s = 0.0;
    for (double v : m.row(i)) {
        s += v;
    }
    return s;
}

inline double column_sum(const permrelax::Matrix& m, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += m(i, j);
    }
    return s;
}

}  // namespace support
