#include <doctest.h>

#include <cstdlib>

#include "permrelax/kernels.hpp"
#include "support.hpp"

using namespace permrelax;
namespace k = permrelax::kernels;

namespace {

Matrix random_rect(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& v : m.values()) {
        v = g(rng);
    }
    return m;
}

}  // namespace

TEST_CASE("matmul variants agree with the definition") {
    const Matrix a(2, 3, std::vector<double>{1, 2, 3, 4, 5, 6});
    const Matrix b(3, 2, std::vector<double>{7, 8, 9, 10, 11, 12});
    CHECK(k::matmul(a, b) == Matrix(2, 2, std::vector<double>{58, 64, 139, 154}));
    CHECK(k::matmul_tn(a.transposed(), b) == k::matmul(a, b));
    CHECK(k::matmul_nt(a, b.transposed()) == k::matmul(a, b));
    CHECK_THROWS_AS(k::matmul(a, a), DimensionMismatch);
    CHECK_THROWS_AS(k::matmul_tn(a, b), DimensionMismatch);
    CHECK_THROWS_AS(k::matmul_nt(a, b), DimensionMismatch);
}

TEST_CASE("row and column reductions") {
    const Matrix m(2, 2, std::vector<double>{3, -4, 0, 2});
    CHECK(k::row_sums(m) == std::vector<double>{-1, 2});
    CHECK(k::column_sums(m) == std::vector<double>{3, -2});
    CHECK(k::row_abs_sums(m) == std::vector<double>{7, 2});
    CHECK(k::column_abs_sums(m) == std::vector<double>{3, 6});
    CHECK(k::row_norms(m) == std::vector<double>{5, 2});
    CHECK(k::column_norms(m)[1] == doctest::Approx(std::sqrt(20.0)));
}

TEST_CASE("scaling kernels divide by the given sums") {
    Matrix m(2, 2, std::vector<double>{1, 1, 1, 3});
    k::divide_columns(m, k::column_sums(m));
    CHECK(m == Matrix(2, 2, std::vector<double>{0.5, 0.25, 0.5, 0.75}));
    std::vector<double> wrong(3, 1.0);
    CHECK_THROWS_AS(k::divide_rows(m, wrong), DimensionMismatch);
}

TEST_CASE("property: OpenMP kernels are bit-identical to the serial reference") {
    Rng rng(21);
    // sizes straddle the parallel threshold
    for (std::size_t n : {1u, 3u, 17u, 64u, 65u, 130u}) {
        const Matrix a = random_rect(n, n + 3, rng);
        const Matrix b = random_rect(n + 3, n, rng);
        const Matrix c = random_rect(n, n + 3, rng);
        CHECK(k::omp::matmul(a, b) == k::serial::matmul(a, b));
        CHECK(k::omp::matmul_tn(a, c) == k::serial::matmul_tn(a, c));
        CHECK(k::omp::matmul_nt(a, c) == k::serial::matmul_nt(a, c));
        CHECK(k::omp::row_sums(a) == k::serial::row_sums(a));
        CHECK(k::omp::column_sums(a) == k::serial::column_sums(a));
        CHECK(k::omp::row_norms(a) == k::serial::row_norms(a));
        CHECK(k::omp::column_norms(a) == k::serial::column_norms(a));
        CHECK(k::omp::row_abs_sums(a) == k::serial::row_abs_sums(a));
        CHECK(k::omp::column_abs_sums(a) == k::serial::column_abs_sums(a));

        Matrix x = a, y = a;
        const auto cs = k::serial::column_abs_sums(a);
        k::omp::divide_columns(x, cs);
        k::serial::divide_columns(y, cs);
        CHECK(x == y);
        const auto rs = k::serial::row_abs_sums(a);
        k::omp::divide_rows(x, rs);
        k::serial::divide_rows(y, rs);
        CHECK(x == y);
    }
}

TEST_CASE("PERMRELAX_THREADS caps the worker count") {
    ::setenv("PERMRELAX_THREADS", "1", 1);
    CHECK(k::max_threads() == 1);
    ::setenv("PERMRELAX_THREADS", "garbage", 1);
    CHECK(k::max_threads() >= 1);
    ::setenv("PERMRELAX_THREADS", "0", 1);
    CHECK(k::max_threads() >= 1);
    ::unsetenv("PERMRELAX_THREADS");
    CHECK(k::max_threads() >= 1);
}
