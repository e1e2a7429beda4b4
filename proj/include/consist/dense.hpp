#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "consist/errors.hpp"

namespace consist {

// Row-major dense matrix of doubles. Immutable use after filling is the
// norm; mutation is in-place via operator() or row spans.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, value) {}

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        DenseMatrix m(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size());
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != m.cols_) {
                throw DimensionMismatch("ragged row in matrix literal");
            }
            std::size_t j = 0;
            for (double v : r) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * cols_, cols_};
    }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

}  // namespace consist
