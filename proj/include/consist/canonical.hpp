#pragma once

#include <cstddef>
#include <vector>

#include "consist/dense.hpp"
#include "consist/ratings.hpp"

namespace consist {

// Per-row additive shifts u and per-column additive shifts v realizing
// M[i,j] -> M[i,j] + u[i] + v[j]. Gauge-fixed: within each connected
// component of the observation graph the v entries sum to zero.
struct ShiftVectors {
    std::vector<double> row_shift;  // u
    std::vector<double> col_shift;  // v
};

// Per-row scales d and per-column scales e realizing
// M[i,j] -> d[i] * M[i,j] * e[j], all strictly positive. Gauge-fixed:
// within each component the e entries multiply to one.
struct ScaleVectors {
    std::vector<double> row_scale;  // d
    std::vector<double> col_scale;  // e
};

template <class TransformT>
struct CanonicalResult {
    DenseMatrix canonical;   // absent entries filled (0 for shift, 1 for scale)
    TransformT transform;
    std::size_t iterations = 0;
    double residual = 0.0;   // max abs observed row/col sum (log-product for scale)
};

struct CanonicalOptions {
    double tol = 1e-10;
    std::size_t max_iter = 10'000;
};

// Shift-invariant canonical form: returns u, v and C with
// C[i,j] = M[i,j] + u[i] + v[j] at observed positions and 0 elsewhere,
// where every observed row sum and column sum of C is within tol of zero.
// Alternating sweeps: each u[i] is set to the negated mean over the row's
// observed (M[i,j] + v[j]), then each v[j] symmetrically; repeat until the
// max abs observed row/col sum is at most tol.
// Throws EmptyMatrix, NoConvergence.
CanonicalResult<ShiftVectors> sc_canonicalize(const RatingsMatrix& m,
                                              const CanonicalOptions& opts = {});

// Inverse transform: output[i,j] = predictions[i,j] - u[i] - v[j].
DenseMatrix sc_restore(const DenseMatrix& predictions, const ShiftVectors& t);

// Scale-invariant canonical form: returns d, e and C with
// C[i,j] = d[i] * M[i,j] * e[j] at observed positions and 1 elsewhere,
// where the product of observed entries in every row and column is within
// [exp(-tol), exp(tol)]. Computed by shift-canonicalizing the elementwise
// log and exponentiating: d = exp(u), e = exp(v).
// Throws NonPositiveEntry, EmptyMatrix, NoConvergence.
CanonicalResult<ScaleVectors> uc_canonicalize(const RatingsMatrix& m,
                                              const CanonicalOptions& opts = {});

// Inverse transform: output[i,j] = predictions[i,j] / (d[i] * e[j]).
DenseMatrix uc_restore(const DenseMatrix& predictions, const ScaleVectors& t);

}  // namespace consist
