// Wall-clock comparison of the OpenMP kernels against their serial
// reference implementations, plus the two SVD paths on a completion-shaped
// workload. Usage: kernel_bench [size]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "consist/kernels.hpp"
#include "consist/rng.hpp"
#include "consist/svd.hpp"

using namespace consist;

namespace {

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
    return m;
}

template <typename F>
double time_ms(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const char* name, double serial_ms, double parallel_ms, double check) {
    std::printf("%-14s serial %9.2f ms   omp %9.2f ms   speedup %5.2fx   max|diff| %.3g\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, check);
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1200;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("matrices: %zux%zu\n\n", n, n);

    const DenseMatrix a = random_matrix(n, n, 1);
    const DenseMatrix b = random_matrix(n, n, 2);

    DenseMatrix r_serial, r_omp;
    report("matmul", time_ms([&] { r_serial = kernels::serial::matmul(a, b); }),
           time_ms([&] { r_omp = kernels::matmul(a, b); }),
           kernels::max_abs_diff(r_serial, r_omp));
    report("matmul_at_b", time_ms([&] { r_serial = kernels::serial::matmul_at_b(a, b); }),
           time_ms([&] { r_omp = kernels::matmul_at_b(a, b); }),
           kernels::max_abs_diff(r_serial, r_omp));
    report("matmul_a_bt", time_ms([&] { r_serial = kernels::serial::matmul_a_bt(a, b); }),
           time_ms([&] { r_omp = kernels::matmul_a_bt(a, b); }),
           kernels::max_abs_diff(r_serial, r_omp));

    // Rank-25 completion-shaped decomposition: randomized vs. exact.
    const std::size_t rows = std::max<std::size_t>(200, n / 2);
    const std::size_t cols = std::max<std::size_t>(150, n / 3);
    const DenseMatrix wide = random_matrix(rows, cols, 3);
    SvdFactors f;
    const double t_rand =
        time_ms([&] { f = truncated_svd(wide, 25, TruncatedSvdOptions{10, 4, 7}); });
    const double sigma_rand = f.singular_values[0];
    const double t_full = time_ms([&] { f = full_svd(wide); });
    std::printf("\n%-14s %9.2f ms (top sigma %.6f)\n", "truncated_svd", t_rand, sigma_rand);
    std::printf("%-14s %9.2f ms (top sigma %.6f)  %zux%zu, k=25\n", "full_svd", t_full,
                f.singular_values[0], rows, cols);
    return 0;
}
