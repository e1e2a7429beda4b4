#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace consist {

// Root of the toolkit's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: malformed data, violated preconditions, unusable arguments.
// The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// An iteration failed to reach its tolerance or otherwise broke down.
// The CLI maps these to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DuplicateEntry : public ValidationError {
public:
    DuplicateEntry(std::size_t row, std::size_t col)
        : ValidationError("duplicate entry at (" + std::to_string(row) + ", " +
                          std::to_string(col) + ")"),
          row(row), col(col) {}
    DuplicateEntry(const std::string& user, const std::string& item, std::size_t line,
                   std::size_t first_line)
        : ValidationError("duplicate (" + user + ", " + item + ") at line " +
                          std::to_string(line) + ", first seen at line " +
                          std::to_string(first_line)),
          line(line) {}
    std::size_t row = 0;
    std::size_t col = 0;
    std::size_t line = 0;  // 0 when not file-sourced
};

class IndexOutOfRange : public ValidationError {
public:
    IndexOutOfRange(std::size_t row, std::size_t col, std::size_t n_rows, std::size_t n_cols)
        : ValidationError("entry (" + std::to_string(row) + ", " + std::to_string(col) +
                          ") outside " + std::to_string(n_rows) + "x" + std::to_string(n_cols)),
          row(row), col(col) {}
    std::size_t row;
    std::size_t col;
};

class EmptyMatrix : public ValidationError {
public:
    EmptyMatrix() : ValidationError("matrix has no observed entries") {}
};

class NonPositiveEntry : public ValidationError {
public:
    NonPositiveEntry(std::size_t row, std::size_t col, double value)
        : ValidationError("entry (" + std::to_string(row) + ", " + std::to_string(col) +
                          ") = " + std::to_string(value) + " must be strictly positive"),
          row(row), col(col), value(value) {}
    std::size_t row;
    std::size_t col;
    double value;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidRank : public ValidationError {
public:
    InvalidRank(std::size_t k, std::size_t limit)
        : ValidationError("rank k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(limit) + "]"),
          k(k), limit(limit) {}
    std::size_t k;
    std::size_t limit;
};

class MissingFillPolicy : public ValidationError {
public:
    MissingFillPolicy() : ValidationError("plain mode requires a fill policy") {}
};

class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& reason)
        : ValidationError("parse error at line " + std::to_string(line) + ": " + reason),
          line(line), reason(reason) {}
    std::size_t line;
    std::string reason;
};

class IoError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NoScorableCells : public ValidationError {
public:
    NoScorableCells() : ValidationError("no scorable test cells") {}
};

class NoConvergence : public NumericalError {
public:
    NoConvergence(double residual, std::size_t max_iter)
        : NumericalError("no convergence after " + std::to_string(max_iter) +
                         " iterations, residual " + std::to_string(residual)),
          residual(residual), max_iter(max_iter) {}
    double residual;
    std::size_t max_iter;
};

class NumericalFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace consist
