#include "consist/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace consist::kernels {

namespace {

void require_inner(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DimensionMismatch("matmul inner dimensions " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

// Row i of c = a * b, accumulated over l ascending.
inline void matmul_row(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                       std::size_t i) {
    const std::size_t p = a.cols();
    const std::size_t n = b.cols();
    double* cr = c.data() + i * n;
    for (std::size_t l = 0; l < p; ++l) {
        const double av = a(i, l);
        const double* br = b.data() + l * n;
        for (std::size_t j = 0; j < n; ++j) cr[j] += av * br[j];
    }
}

// Row i of c = a^T * b (i indexes columns of a), accumulated over l ascending.
inline void matmul_at_b_row(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                            std::size_t i) {
    const std::size_t m = a.rows();
    const std::size_t n = b.cols();
    double* cr = c.data() + i * n;
    for (std::size_t l = 0; l < m; ++l) {
        const double av = a(l, i);
        const double* br = b.data() + l * n;
        for (std::size_t j = 0; j < n; ++j) cr[j] += av * br[j];
    }
}

// Row i of c = a * b^T; each element is a contiguous dot product.
inline void matmul_a_bt_row(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                            std::size_t i) {
    const std::size_t p = a.cols();
    const std::size_t n = b.rows();
    const double* ar = a.data() + i * p;
    for (std::size_t j = 0; j < n; ++j) {
        const double* br = b.data() + j * p;
        double sum = 0.0;
        for (std::size_t l = 0; l < p; ++l) sum += ar[l] * br[l];
        c(i, j) = sum;
    }
}

}  // namespace

namespace serial {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require_inner(a.cols(), b.rows());
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) matmul_row(a, b, c, i);
    return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    require_inner(a.rows(), b.rows());
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) matmul_at_b_row(a, b, c, i);
    return c;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    require_inner(a.cols(), b.cols());
    DenseMatrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) matmul_a_bt_row(a, b, c, i);
    return c;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw DimensionMismatch("max_abs_diff shape mismatch");
    double worst = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::fabs(pa[i] - pb[i]);
        if (d > worst) worst = d;
    }
    return worst;
}

}  // namespace serial

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require_inner(a.cols(), b.rows());
    DenseMatrix c(a.rows(), b.cols());
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) matmul_row(a, b, c, static_cast<std::size_t>(i));
    return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    require_inner(a.rows(), b.rows());
    DenseMatrix c(a.cols(), b.cols());
    const std::int64_t m = static_cast<std::int64_t>(a.cols());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) matmul_at_b_row(a, b, c, static_cast<std::size_t>(i));
    return c;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    require_inner(a.cols(), b.cols());
    DenseMatrix c(a.rows(), b.rows());
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) matmul_a_bt_row(a, b, c, static_cast<std::size_t>(i));
    return c;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw DimensionMismatch("max_abs_diff shape mismatch");
    double worst = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = std::fabs(pa[i] - pb[i]);
        if (d > worst) worst = d;
    }
    return worst;
}

}  // namespace consist::kernels
