#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace permrelax {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual);
    std::size_t expected;
    std::size_t actual;
};

class NotAPermutation : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class TooLarge : public Error {
public:
    TooLarge(std::size_t n, std::size_t limit);
    std::size_t n;
    std::size_t limit;
};

enum class Axis { row, column };

/// A row or column of a matrix summed to zero during normalization.
class ZeroSum : public Error {
public:
    ZeroSum(Axis axis, std::size_t index);
    Axis axis;
    std::size_t index;
};

/// round_argmax found several rows whose maxima fall in the same column.
class Collision : public Error {
public:
    Collision(std::vector<std::size_t> rows, std::size_t column);
    std::vector<std::size_t> rows;
    std::size_t column;
};

}  // namespace permrelax
