#include "permrelax/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace permrelax::kernels {

namespace {

void require_product(const Matrix& a, std::size_t a_inner, const Matrix& b, std::size_t b_inner) {
    (void)a;
    (void)b;
    if (a_inner != b_inner) {
        throw DimensionMismatch(a_inner, b_inner);
    }
}

bool large(const Matrix& m) { return m.size() >= kParallelThreshold; }

bool large(std::size_t rows, std::size_t inner, std::size_t cols) {
    return rows * inner * cols >= kParallelThreshold * 64;
}

}  // namespace

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
    require_product(a, a.cols(), b, b.rows());
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    require_product(a, a.rows(), b, b.rows());
    Matrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t k = 0; k < a.rows(); ++k) {
            const double aki = a(k, i);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aki * b(k, j);
            }
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    require_product(a, a.cols(), b, b.cols());
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                s += a(i, k) * b(j, k);
            }
            c(i, j) = s;
        }
    }
    return c;
}

std::vector<double> row_sums(const Matrix& m) {
    std::vector<double> s(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s[i] += m(i, j);
        }
    }
    return s;
}

std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s[j] += m(i, j);
        }
    }
    return s;
}

std::vector<double> row_norms(const Matrix& m) {
    std::vector<double> s(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s[i] += m(i, j) * m(i, j);
        }
        s[i] = std::sqrt(s[i]);
    }
    return s;
}

std::vector<double> column_norms(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s[j] += m(i, j) * m(i, j);
        }
    }
    for (double& v : s) {
        v = std::sqrt(v);
    }
    return s;
}

std::vector<double> row_abs_sums(const Matrix& m) {
    std::vector<double> s(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s[i] += std::abs(m(i, j));
        }
    }
    return s;
}

std::vector<double> column_abs_sums(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            s[j] += std::abs(m(i, j));
        }
    }
    return s;
}

void divide_columns(Matrix& m, std::span<const double> divisors) {
    if (divisors.size() != m.cols()) {
        throw DimensionMismatch(m.cols(), divisors.size());
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            m(i, j) /= divisors[j];
        }
    }
}

void divide_rows(Matrix& m, std::span<const double> divisors) {
    if (divisors.size() != m.rows()) {
        throw DimensionMismatch(m.rows(), divisors.size());
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            m(i, j) /= divisors[i];
        }
    }
}

}  // namespace serial

namespace omp {

Matrix matmul(const Matrix& a, const Matrix& b) {
    require_product(a, a.cols(), b, b.rows());
    const std::size_t rows = a.rows();
    const std::size_t inner = a.cols();
    const std::size_t cols = b.cols();
    Matrix c(rows, cols);
#pragma omp parallel for schedule(static) if (large(rows, inner, cols))
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < inner; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < cols; ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    require_product(a, a.rows(), b, b.rows());
    const std::size_t rows = a.cols();
    const std::size_t inner = a.rows();
    const std::size_t cols = b.cols();
    Matrix c(rows, cols);
#pragma omp parallel for schedule(static) if (large(rows, inner, cols))
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < inner; ++k) {
            const double aki = a(k, i);
            for (std::size_t j = 0; j < cols; ++j) {
                c(i, j) += aki * b(k, j);
            }
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    require_product(a, a.cols(), b, b.cols());
    const std::size_t rows = a.rows();
    const std::size_t inner = a.cols();
    const std::size_t cols = b.rows();
    Matrix c(rows, cols);
#pragma omp parallel for schedule(static) if (large(rows, inner, cols))
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < inner; ++k) {
                s += a(i, k) * b(j, k);
            }
            c(i, j) = s;
        }
    }
    return c;
}

std::vector<double> row_sums(const Matrix& m) {
    std::vector<double> s(m.rows(), 0.0);
#pragma omp parallel for schedule(static) if (large(m))
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc += m(i, j);
        }
        s[i] = acc;
    }
    return s;
}

std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
#pragma omp parallel for schedule(static) if (large(m))
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            acc += m(i, j);
        }
        s[j] = acc;
    }
    return s;
}

std::vector<double> row_norms(const Matrix& m) {
    std::vector<double> s(m.rows(), 0.0);
#pragma omp parallel for schedule(static) if (large(m))
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc += m(i, j) * m(i, j);
        }
        s[i] = std::sqrt(acc);
    }
    return s;
}

std::vector<double> column_norms(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
#pragma omp parallel for schedule(static) if (large(m))
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            acc += m(i, j) * m(i, j);
        }
        s[j] = std::sqrt(acc);
    }
    return s;
}

std::vector<double> row_abs_sums(const Matrix& m) {
    std::vector<double> s(m.rows(), 0.0);
#pragma omp parallel for schedule(static) if (large(m))
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc += std::abs(m(i, j));
        }
        s[i] = acc;
    }
    return s;
}

std::vector<double> column_abs_sums(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
#pragma omp parallel for schedule(static) if (large(m))
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            acc += std::abs(m(i, j));
        }
        s[j] = acc;
    }
    return s;
}

void divide_columns(Matrix& m, std::span<const double> divisors) {
    if (divisors.size() != m.cols()) {
        throw DimensionMismatch(m.cols(), divisors.size());
    }
#pragma omp parallel for schedule(static) if (large(m))
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            m(i, j) /= divisors[j];
        }
    }
}

void divide_rows(Matrix& m, std::span<const double> divisors) {
    if (divisors.size() != m.rows()) {
        throw DimensionMismatch(m.rows(), divisors.size());
    }
#pragma omp parallel for schedule(static) if (large(m))
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            m(i, j) /= divisors[i];
        }
    }
}

}  // namespace omp

int max_threads() {
    if (const char* env = std::getenv("PERMRELAX_THREADS")) {
        try {
            const int requested = std::stoi(env);
            if (requested > 0) {
                return requested;
            }
        } catch (const std::exception&) {
            // fall through to the runtime default
        }
    }
    return omp_get_max_threads();
}

void configure_threads_from_env() { omp_set_num_threads(max_threads()); }

}  // namespace permrelax::kernels
