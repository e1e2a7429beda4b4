#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "consist/dense.hpp"
#include "consist/errors.hpp"

namespace consist {

struct RatingEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

struct RatingRange {
    double min = 0.0;
    double max = 0.0;
};

// Masked user x item matrix of observed ratings. Coordinate list plus
// per-row and per-column entry indices, so row-wise and column-wise
// sweeps are both linear in the number of observed entries. Immutable
// after build(); safe to share across threads.
class RatingsMatrix {
public:
    std::size_t rows() const { return n_rows_; }
    std::size_t cols() const { return n_cols_; }
    std::size_t n_observed() const { return entries_.size(); }
    const std::vector<RatingEntry>& entries() const { return entries_; }
    const std::optional<RatingRange>& rating_range() const { return rating_range_; }

    // Indices into entries() for one row / one column.
    std::span<const std::size_t> row_entries(std::size_t i) const {
        return {row_index_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
    }
    std::span<const std::size_t> col_entries(std::size_t j) const {
        return {col_index_.data() + col_offsets_[j], col_offsets_[j + 1] - col_offsets_[j]};
    }

    friend RatingsMatrix build(std::size_t, std::size_t, std::vector<RatingEntry>,
                               std::optional<RatingRange>);

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<RatingEntry> entries_;
    std::optional<RatingRange> rating_range_;
    std::vector<std::size_t> row_offsets_, row_index_;
    std::vector<std::size_t> col_offsets_, col_index_;
};

// Validates indices, rejects duplicate (row, col) pairs, builds the
// row/column indices. Throws IndexOutOfRange, DuplicateEntry, or
// ValidationError when a rating falls outside a supplied range.
RatingsMatrix build(std::size_t n_rows, std::size_t n_cols, std::vector<RatingEntry> triplets,
                    std::optional<RatingRange> rating_range = std::nullopt);

// Observed positions keep their rating, absent positions get `fill`.
DenseMatrix to_dense(const RatingsMatrix& m, double fill);

// Connected components of the bipartite observation graph (rows and
// columns are nodes, observed entries are edges). Ids are assigned in
// first-appearance order scanning rows then columns, so a component's id
// is ordered by its smallest row index; empty rows/columns come last as
// flagged singletons.
struct ComponentLabeling {
    std::vector<std::size_t> row_component;
    std::vector<std::size_t> col_component;
    std::size_t n_components = 0;
    std::vector<char> row_empty;
    std::vector<char> col_empty;
};

ComponentLabeling components(const RatingsMatrix& m);

// Observed-entry transforms: value -> row_factor * value * col_factor,
// value -> value + row_delta + col_delta. Used by the attack simulator
// and the consistency property tests.
RatingsMatrix scaled(const RatingsMatrix& m, std::span<const double> row_scale,
                     std::span<const double> col_scale);
RatingsMatrix shifted(const RatingsMatrix& m, std::span<const double> row_shift,
                      std::span<const double> col_shift);

}  // namespace consist
