#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "consist/dense.hpp"

namespace consist {

// Truncated decomposition a ~ u_factor * diag(singular_values) * v_factor^T
// with column-orthonormal factors and nonincreasing nonnegative values.
struct SvdFactors {
    DenseMatrix u_factor;                  // n_rows x k
    std::vector<double> singular_values;   // length k
    DenseMatrix v_factor;                  // n_cols x k
    std::size_t rank() const { return singular_values.size(); }
};

struct TruncatedSvdOptions {
    std::size_t oversample = 10;
    std::size_t power_iters = 4;
    std::uint64_t seed = 0;
};

// Exact decomposition with k = min(n_rows, n_cols), via one-sided Jacobi
// rotations. Throws NumericalFailure if the rotation sweeps do not settle.
SvdFactors full_svd(const DenseMatrix& a);

// Rank-k decomposition via a seeded Gaussian range finder with oversampling
// and power iterations. Falls back to the exact path when the matrix is
// small (min dimension <= 64) or k is a large fraction of it (>= half),
// where the randomized machinery buys nothing. Deterministic for a fixed
// seed regardless of thread count. Throws InvalidRank, NumericalFailure.
SvdFactors truncated_svd(const DenseMatrix& a, std::size_t k,
                         const TruncatedSvdOptions& opts = {});

// u_factor[:, :k] * diag(singular_values[:k]) * v_factor[:, :k]^T.
// Throws InvalidRank when k exceeds the stored rank.
DenseMatrix reconstruct(const SvdFactors& f, std::size_t k);

}  // namespace consist
