#include "consist/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace consist {

RatingsMatrix build(std::size_t n_rows, std::size_t n_cols, std::vector<RatingEntry> triplets,
                    std::optional<RatingRange> rating_range) {
    for (const auto& e : triplets) {
        if (e.row >= n_rows || e.col >= n_cols) {
            throw IndexOutOfRange(e.row, e.col, n_rows, n_cols);
        }
        if (!std::isfinite(e.value)) {
            throw ValidationError("non-finite rating at (" + std::to_string(e.row) + ", " +
                                  std::to_string(e.col) + ")");
        }
        if (rating_range && (e.value < rating_range->min || e.value > rating_range->max)) {
            throw ValidationError("rating " + std::to_string(e.value) + " at (" +
                                  std::to_string(e.row) + ", " + std::to_string(e.col) +
                                  ") outside declared range");
        }
    }

    // Duplicate detection over sorted position keys.
    std::vector<std::size_t> order(triplets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t idx) { return triplets[idx].row * n_cols + triplets[idx].col; };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (key(order[i - 1]) == key(order[i])) {
            throw DuplicateEntry(triplets[order[i]].row, triplets[order[i]].col);
        }
    }

    RatingsMatrix m;
    m.n_rows_ = n_rows;
    m.n_cols_ = n_cols;
    m.entries_ = std::move(triplets);
    m.rating_range_ = rating_range;

    m.row_offsets_.assign(n_rows + 1, 0);
    m.col_offsets_.assign(n_cols + 1, 0);
    for (const auto& e : m.entries_) {
        ++m.row_offsets_[e.row + 1];
        ++m.col_offsets_[e.col + 1];
    }
    std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());
    std::partial_sum(m.col_offsets_.begin(), m.col_offsets_.end(), m.col_offsets_.begin());

    m.row_index_.resize(m.entries_.size());
    m.col_index_.resize(m.entries_.size());
    std::vector<std::size_t> row_fill(m.row_offsets_.begin(), m.row_offsets_.end() - 1);
    std::vector<std::size_t> col_fill(m.col_offsets_.begin(), m.col_offsets_.end() - 1);
    for (std::size_t idx = 0; idx < m.entries_.size(); ++idx) {
        m.row_index_[row_fill[m.entries_[idx].row]++] = idx;
        m.col_index_[col_fill[m.entries_[idx].col]++] = idx;
    }
    return m;
}

DenseMatrix to_dense(const RatingsMatrix& m, double fill) {
    DenseMatrix d(m.rows(), m.cols(), fill);
    for (const auto& e : m.entries()) d(e.row, e.col) = e.value;
    return d;
}

namespace {

// Union-find over row nodes [0, n_rows) and column nodes [n_rows, n_rows+n_cols).
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> rank_;
};

}  // namespace

ComponentLabeling components(const RatingsMatrix& m) {
    const std::size_t n_rows = m.rows();
    const std::size_t n_cols = m.cols();
    DisjointSets sets(n_rows + n_cols);
    for (const auto& e : m.entries()) sets.unite(e.row, n_rows + e.col);

    ComponentLabeling out;
    out.row_component.resize(n_rows);
    out.col_component.resize(n_cols);
    out.row_empty.resize(n_rows);
    out.col_empty.resize(n_cols);

    // First-appearance ids: rows first, then columns, so every component
    // containing a row is numbered by its smallest row index.
    std::vector<std::size_t> id_of_root(n_rows + n_cols, SIZE_MAX);
    std::size_t next_id = 0;
    for (std::size_t i = 0; i < n_rows; ++i) {
        const std::size_t root = sets.find(i);
        if (id_of_root[root] == SIZE_MAX) id_of_root[root] = next_id++;
        out.row_component[i] = id_of_root[root];
        out.row_empty[i] = m.row_entries(i).empty() ? 1 : 0;
    }
    for (std::size_t j = 0; j < n_cols; ++j) {
        const std::size_t root = sets.find(n_rows + j);
        if (id_of_root[root] == SIZE_MAX) id_of_root[root] = next_id++;
        out.col_component[j] = id_of_root[root];
        out.col_empty[j] = m.col_entries(j).empty() ? 1 : 0;
    }
    out.n_components = next_id;
    return out;
}

RatingsMatrix scaled(const RatingsMatrix& m, std::span<const double> row_scale,
                     std::span<const double> col_scale) {
    if (row_scale.size() != m.rows() || col_scale.size() != m.cols()) {
        throw DimensionMismatch("scale vector lengths do not match matrix shape");
    }
    std::vector<RatingEntry> entries = m.entries();
    for (auto& e : entries) e.value *= row_scale[e.row] * col_scale[e.col];
    return build(m.rows(), m.cols(), std::move(entries), std::nullopt);
}

RatingsMatrix shifted(const RatingsMatrix& m, std::span<const double> row_shift,
                      std::span<const double> col_shift) {
    if (row_shift.size() != m.rows() || col_shift.size() != m.cols()) {
        throw DimensionMismatch("shift vector lengths do not match matrix shape");
    }
    std::vector<RatingEntry> entries = m.entries();
    for (auto& e : entries) e.value += row_shift[e.row] + col_shift[e.col];
    return build(m.rows(), m.cols(), std::move(entries), std::nullopt);
}

}  // namespace consist
