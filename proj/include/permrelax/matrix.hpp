#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "permrelax/error.hpp"

namespace permrelax {

/// Dense row-major real matrix. Used directly for rectangular data
/// (teacher maps, datasets); square operands go through SquareMatrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    bool all_finite() const noexcept;

    Matrix transposed() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

/// N x N matrix: the carrier for relaxed permutations and QAP data.
class SquareMatrix : public Matrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : Matrix(n, n, fill) {}
    SquareMatrix(std::size_t n, std::vector<double> values);
    /// Rejects non-square input with DimensionMismatch.
    explicit SquareMatrix(Matrix m);
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SquareMatrix identity(std::size_t n);

    std::size_t n() const noexcept { return rows(); }
};

/// Exact permutation stored as an index map: map[i] is the column of the one in row i.
class Permutation {
public:
    Permutation() = default;
    /// Throws NotAPermutation unless map is a bijection on {0..n-1}.
    explicit Permutation(std::vector<std::size_t> map);

    static Permutation identity(std::size_t n);

    std::size_t n() const noexcept { return map_.size(); }
    std::size_t operator[](std::size_t i) const noexcept { return map_[i]; }
    const std::vector<std::size_t>& map() const noexcept { return map_; }

    Permutation inverse() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> map_;
};

SquareMatrix permutation_to_matrix(const Permutation& p);

/// Entries must be 0 or 1 within this absolute tolerance.
inline constexpr double kPermutationTolerance = 1e-9;

/// Succeeds iff m is a 0/1 permutation matrix; otherwise NotAPermutation.
Permutation matrix_to_permutation(const SquareMatrix& m);

double frobenius_norm(const Matrix& a);

/// Throws DimensionMismatch on shape mismatch.
double frobenius_distance(const Matrix& a, const Matrix& b);

/// max over rows and columns of |sum - 1|.
double constraint_violation(const SquareMatrix& m);

/// Fixture text format: first line n, then n whitespace-separated rows.
SquareMatrix read_square_matrix(std::istream& in);
void write_square_matrix(std::ostream& out, const SquareMatrix& m);

std::string to_string(const Permutation& p);

}  // namespace permrelax
