#pragma once

// Data-parallel inner loops. Every kernel exists twice: an OpenMP version
// used by the library and a plain serial reference that the tests compare
// against. Both produce bit-identical results (reductions run in the same
// order per output element).

#include <cstddef>
#include <span>
#include <vector>

#include "permrelax/matrix.hpp"

namespace permrelax::kernels {

/// Matrices below this many entries run serially even in the omp path.
inline constexpr std::size_t kParallelThreshold = 64 * 64;

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a * b^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

std::vector<double> row_sums(const Matrix& m);
std::vector<double> column_sums(const Matrix& m);
std::vector<double> row_norms(const Matrix& m);
std::vector<double> column_norms(const Matrix& m);
std::vector<double> row_abs_sums(const Matrix& m);
std::vector<double> column_abs_sums(const Matrix& m);

/// m(i, j) /= divisors[j]
void divide_columns(Matrix& m, std::span<const double> divisors);
/// m(i, j) /= divisors[i]
void divide_rows(Matrix& m, std::span<const double> divisors);

}  // namespace serial

namespace omp {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);

std::vector<double> row_sums(const Matrix& m);
std::vector<double> column_sums(const Matrix& m);
std::vector<double> row_norms(const Matrix& m);
std::vector<double> column_norms(const Matrix& m);
std::vector<double> row_abs_sums(const Matrix& m);
std::vector<double> column_abs_sums(const Matrix& m);

void divide_columns(Matrix& m, std::span<const double> divisors);
void divide_rows(Matrix& m, std::span<const double> divisors);

}  // namespace omp

using omp::column_abs_sums;
using omp::column_norms;
using omp::column_sums;
using omp::divide_columns;
using omp::divide_rows;
using omp::matmul;
using omp::matmul_nt;
using omp::matmul_tn;
using omp::row_abs_sums;
using omp::row_norms;
using omp::row_sums;

/// Upper bound on worker threads: PERMRELAX_THREADS if set and positive,
/// otherwise the OpenMP default.
int max_threads();

/// Applies max_threads() to the OpenMP runtime.
void configure_threads_from_env();

}  // namespace permrelax::kernels
