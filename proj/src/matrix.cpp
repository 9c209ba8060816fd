#include "permrelax/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "permrelax/kernels.hpp"

namespace permrelax {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionMismatch(rows_ * cols_, data_.size());
    }
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionMismatch(size(), other.size());
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionMismatch(size(), other.size());
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> values)
    : Matrix(n, n, std::move(values)) {}

SquareMatrix::SquareMatrix(Matrix m) : Matrix(std::move(m)) {
    if (rows() != cols()) {
        throw DimensionMismatch(rows(), cols());
    }
}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : Matrix(rows.size(), rows.size()) {
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != this->n()) {
            throw DimensionMismatch(this->n(), r.size());
        }
        std::size_t j = 0;
        for (double v : r) {
            (*this)(i, j++) = v;
        }
        ++i;
    }
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
        if (v >= map_.size() || seen[v]) {
            throw NotAPermutation("index map is not a bijection");
        }
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> map(n);
    for (std::size_t i = 0; i < n; ++i) {
        map[i] = i;
    }
    return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) {
        inv[map_[i]] = i;
    }
    return Permutation(std::move(inv));
}

SquareMatrix permutation_to_matrix(const Permutation& p) {
    SquareMatrix m(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) {
        m(i, p[i]) = 1.0;
    }
    return m;
}

Permutation matrix_to_permutation(const SquareMatrix& m) {
    const std::size_t n = m.n();
    std::vector<std::size_t> map(n);
    std::vector<bool> column_used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = m(i, j);
            if (std::abs(v - 1.0) <= kPermutationTolerance) {
                map[i] = j;
                ++ones;
            } else if (std::abs(v) > kPermutationTolerance) {
                throw NotAPermutation("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") is neither 0 nor 1");
            }
        }
        if (ones != 1) {
            throw NotAPermutation("row " + std::to_string(i) + " has " + std::to_string(ones) +
                                  " unit entries");
        }
        if (column_used[map[i]]) {
            throw NotAPermutation("column " + std::to_string(map[i]) + " has several unit entries");
        }
        column_used[map[i]] = true;
    }
    return Permutation(std::move(map));
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.values()) {
        s += v * v;
    }
    return std::sqrt(s);
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(a.size(), b.size());
    }
    double s = 0.0;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) {
        const double d = av[k] - bv[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double constraint_violation(const SquareMatrix& m) {
    double worst = 0.0;
    for (double s : kernels::row_sums(m)) {
        worst = std::max(worst, std::abs(s - 1.0));
    }
    for (double s : kernels::column_sums(m)) {
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

SquareMatrix read_square_matrix(std::istream& in) {
    long long n = 0;
    if (!(in >> n) || n <= 0) {
        throw ParseError("expected a positive matrix dimension");
    }
    SquareMatrix m(static_cast<std::size_t>(n));
    for (double& v : m.values()) {
        if (!(in >> v)) {
            throw ParseError("matrix has fewer than n*n entries");
        }
    }
    if (!m.all_finite()) {
        throw ParseError("matrix entries must be finite");
    }
    return m;
}

void write_square_matrix(std::ostream& out, const SquareMatrix& m) {
    const auto old_precision = out.precision(17);
    out << m.n() << '\n';
    for (std::size_t i = 0; i < m.n(); ++i) {
        for (std::size_t j = 0; j < m.n(); ++j) {
            out << (j ? " " : "") << m(i, j);
        }
        out << '\n';
    }
    out.precision(old_precision);
}

std::string to_string(const Permutation& p) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < p.n(); ++i) {
        os << (i ? "," : "") << p[i];
    }
    os << ']';
    return os.str();
}

}  // namespace permrelax
