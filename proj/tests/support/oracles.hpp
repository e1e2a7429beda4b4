#pragma once

// Independent reference computations for the test suites. Nothing here
// shares solver code with the library: components are recomputed by BFS,
// least squares goes through a local Householder QR.

#include <cstdint>
#include <vector>

#include "consist/dense.hpp"
#include "consist/ratings.hpp"
#include "consist/rng.hpp"

namespace consist::testing {

struct ShiftSolution {
    std::vector<double> row_shift;
    std::vector<double> col_shift;
    DenseMatrix canonical;  // zero-filled at absent positions
};

// Closed-form shift canonicalization for fully observed matrices:
// C[i,j] = M[i,j] - rowmean_i - colmean_j + grandmean.
ShiftSolution double_center(const DenseMatrix& m);

// Dense least-squares solve of the zero-sum constraint system
// (one equation u[i] + v[j] = -M[i,j] per observed entry, plus gauge
// rows fixing each component's column-shift sum to zero).
ShiftSolution lstsq_shift_oracle(const RatingsMatrix& m);

// min ||a x - b|| via Householder QR; requires rows >= cols and full
// column rank.
std::vector<double> lstsq(DenseMatrix a, std::vector<double> b);

// Random masked matrix whose observation graph is connected: a random
// bipartite spanning tree plus extra entries at the given density.
// Values are uniform in [low, high].
RatingsMatrix random_connected(Rng& rng, std::size_t rows, std::size_t cols,
                               double extra_density, double low, double high);

DenseMatrix random_dense(Rng& rng, std::size_t rows, std::size_t cols);

// Matrix with a planted spectrum: u_i, v_i from orthonormalized Gaussian
// columns, singular values as given.
DenseMatrix planted_spectrum(Rng& rng, std::size_t rows, std::size_t cols,
                             const std::vector<double>& sigma);

}  // namespace consist::testing
