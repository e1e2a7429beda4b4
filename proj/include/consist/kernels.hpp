#pragma once

#include "consist/dense.hpp"

// Dense kernels behind the SVD engine and pipeline. Every kernel exists
// twice: kernels::serial holds the plain reference loops, the kernels::
// entry points add OpenMP over independent output rows. Per-element
// accumulation order is identical in both, so results are bit-identical
// for any thread count. bench/kernel_bench compares the two.
namespace consist::kernels {

namespace serial {

// c = a * b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// c = a^T * b
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);

// c = a * b^T
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace serial

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace consist::kernels
