#include "permrelax/error.hpp"

#include <sstream>

namespace permrelax {

namespace {

std::string collision_message(const std::vector<std::size_t>& rows, std::size_t column) {
    std::ostringstream os;
    os << "argmax collision at column " << column << " for rows {";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        os << (k ? "," : "") << rows[k];
    }
    os << "}";
    return os.str();
}

}  // namespace

DimensionMismatch::DimensionMismatch(std::size_t expected_, std::size_t actual_)
    : Error("dimension mismatch: expected " + std::to_string(expected_) + ", got " +
            std::to_string(actual_)),
      expected(expected_),
      actual(actual_) {}

TooLarge::TooLarge(std::size_t n_, std::size_t limit_)
    : Error("dimension " + std::to_string(n_) + " exceeds limit " + std::to_string(limit_)),
      n(n_),
      limit(limit_) {}

ZeroSum::ZeroSum(Axis axis_, std::size_t index_)
    : Error(std::string(axis_ == Axis::row ? "row" : "column") + " " + std::to_string(index_) +
            " sums to zero"),
      axis(axis_),
      index(index_) {}

Collision::Collision(std::vector<std::size_t> rows_, std::size_t column_)
    : Error(collision_message(rows_, column_)), rows(std::move(rows_)), column(column_) {}

}  // namespace permrelax
