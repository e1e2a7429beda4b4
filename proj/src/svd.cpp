#include "consist/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "consist/errors.hpp"
#include "consist/kernels.hpp"
#include "consist/rng.hpp"

namespace consist {

namespace {

constexpr std::size_t kSmallDim = 64;       // full path below this
constexpr std::size_t kMaxJacobiSweeps = 96;
constexpr double kJacobiTol = 1e-14;        // relative off-diagonal threshold

// Columns of a as contiguous buffers.
std::vector<std::vector<double>> to_columns(const DenseMatrix& a) {
    std::vector<std::vector<double>> cols(a.cols(), std::vector<double>(a.rows()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) cols[j][i] = a(i, j);
    }
    return cols;
}

// Orthonormal completion for columns whose singular value vanished: take
// unit basis vectors, orthogonalize against the accepted columns, keep the
// best-conditioned candidate.
void complete_column(std::vector<std::vector<double>>& u_cols,
                     const std::vector<char>& valid, std::size_t target, std::size_t m) {
    std::vector<double> best;
    double best_norm = -1.0;
    for (std::size_t cand = 0; cand < m; ++cand) {
        std::vector<double> w(m, 0.0);
        w[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < u_cols.size(); ++j) {
                if (!valid[j]) continue;
                double r = 0.0;
                for (std::size_t i = 0; i < m; ++i) r += u_cols[j][i] * w[i];
                for (std::size_t i = 0; i < m; ++i) w[i] -= r * u_cols[j][i];
            }
        }
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > best_norm) {
            best_norm = norm;
            best = std::move(w);
            if (best_norm > 0.5) break;  // good enough, stop scanning
        }
    }
    if (best_norm <= 0.0) throw NumericalFailure("orthonormal completion failed");
    for (double& x : best) x /= best_norm;
    u_cols[target] = std::move(best);
}

// One-sided Jacobi on a tall matrix (rows >= cols). Returns factors with
// k = cols.
SvdFactors jacobi_tall(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    auto w = to_columns(a);

    // V accumulates the rotations, kept as columns too.
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

    bool settled = (n <= 1);
    for (std::size_t sweep = 0; sweep < kMaxJacobiSweeps && !settled; ++sweep) {
        settled = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += w[p][i] * w[p][i];
                    beta += w[q][i] * w[q][i];
                    gamma += w[p][i] * w[q][i];
                }
                if (std::fabs(gamma) <= kJacobiTol * std::sqrt(alpha * beta)) continue;
                settled = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w[p][i];
                    const double wq = w[q][i];
                    w[p][i] = c * wp - s * wq;
                    w[q][i] = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v[p][i];
                    const double vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
    }
    if (!settled) throw NumericalFailure("Jacobi SVD did not converge");

    std::vector<double> sigma(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double norm = 0.0;
        for (double x : w[j]) norm += x * x;
        sigma[j] = std::sqrt(norm);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    const double sigma_max = sigma.empty() ? 0.0 : sigma[order[0]];
    const double negligible = sigma_max * static_cast<double>(std::max(m, n)) * 1e-16;

    SvdFactors f;
    f.singular_values.resize(n);
    std::vector<std::vector<double>> u_cols(n);
    std::vector<char> valid(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t j = order[r];
        f.singular_values[r] = sigma[j];
        if (sigma[j] > negligible && sigma[j] > 0.0) {
            u_cols[r] = w[j];
            for (double& x : u_cols[r]) x /= sigma[j];
            valid[r] = 1;
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        if (!valid[r]) {
            complete_column(u_cols, valid, r);
            valid[r] = 1;
        }
    }

    f.u_factor = DenseMatrix(m, n);
    f.v_factor = DenseMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < m; ++i) f.u_factor(i, r) = u_cols[r][i];
        for (std::size_t i = 0; i < n; ++i) f.v_factor(i, r) = v[order[r]][i];
    }
    return f;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    }
    return t;
}

// Modified Gram-Schmidt with reorthogonalization, in place on column
// buffers. Columns that collapse (rank deficiency) are replaced with
// seeded random directions so the basis stays orthonormal.
void orthonormalize(std::vector<std::vector<double>>& cols, Rng& rng) {
    const std::size_t m = cols.empty() ? 0 : cols[0].size();
    double scale = 0.0;
    for (const auto& c : cols) {
        double norm = 0.0;
        for (double x : c) norm += x * x;
        scale = std::max(scale, std::sqrt(norm));
    }
    if (scale == 0.0) scale = 1.0;

    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = 0; i < j; ++i) {
                    double r = 0.0;
                    for (std::size_t l = 0; l < m; ++l) r += cols[i][l] * cols[j][l];
                    for (std::size_t l = 0; l < m; ++l) cols[j][l] -= r * cols[i][l];
                }
            }
            double norm = 0.0;
            for (double x : cols[j]) norm += x * x;
            norm = std::sqrt(norm);
            if (norm > scale * 1e-12) {
                for (double& x : cols[j]) x /= norm;
                break;
            }
            if (attempt == 7) throw NumericalFailure("range basis collapsed");
            for (double& x : cols[j]) x = rng.gaussian();
        }
    }
}

DenseMatrix columns_to_matrix(const std::vector<std::vector<double>>& cols, std::size_t m) {
    DenseMatrix out(m, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < m; ++i) out(i, j) = cols[j][i];
    }
    return out;
}

SvdFactors truncate(SvdFactors f, std::size_t k) {
    if (f.rank() == k) return f;
    SvdFactors out;
    out.singular_values.assign(f.singular_values.begin(),
                               f.singular_values.begin() + static_cast<std::ptrdiff_t>(k));
    out.u_factor = DenseMatrix(f.u_factor.rows(), k);
    out.v_factor = DenseMatrix(f.v_factor.rows(), k);
    for (std::size_t i = 0; i < f.u_factor.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) out.u_factor(i, j) = f.u_factor(i, j);
    }
    for (std::size_t i = 0; i < f.v_factor.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) out.v_factor(i, j) = f.v_factor(i, j);
    }
    return out;
}

}  // namespace

SvdFactors full_svd(const DenseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw ValidationError("empty matrix has no SVD");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a.data()[i])) throw ValidationError("non-finite entry in SVD input");
    }
    if (a.rows() >= a.cols()) return jacobi_tall(a);
    SvdFactors f = jacobi_tall(transpose(a));
    std::swap(f.u_factor, f.v_factor);
    return f;
}

SvdFactors truncated_svd(const DenseMatrix& a, std::size_t k, const TruncatedSvdOptions& opts) {
    const std::size_t min_dim = std::min(a.rows(), a.cols());
    if (k < 1 || k > min_dim) throw InvalidRank(k, min_dim);
    if (min_dim <= kSmallDim || 2 * k >= min_dim) return truncate(full_svd(a), k);

    const std::size_t width = std::min(k + opts.oversample, min_dim);
    Rng rng(mix_seed(opts.seed, 0x5fd1));

    // Gaussian test matrix, n_cols x width.
    DenseMatrix omega(a.cols(), width);
    for (std::size_t i = 0; i < omega.size(); ++i) omega.data()[i] = rng.gaussian();

    auto q = to_columns(kernels::matmul(a, omega));
    orthonormalize(q, rng);
    for (std::size_t it = 0; it < opts.power_iters; ++it) {
        auto z = to_columns(kernels::matmul_at_b(columns_to_matrix(q, a.rows()), a));
        orthonormalize(z, rng);
        q = to_columns(kernels::matmul(a, columns_to_matrix(z, a.cols())));
        orthonormalize(q, rng);
    }

    const DenseMatrix q_mat = columns_to_matrix(q, a.rows());
    const DenseMatrix projected = kernels::matmul_at_b(q_mat, a);  // width x n_cols

    // Exact SVD of the projected matrix, then lift the left factor.
    SvdFactors small = full_svd(projected);
    SvdFactors out;
    out.singular_values.assign(small.singular_values.begin(),
                               small.singular_values.begin() + static_cast<std::ptrdiff_t>(k));
    out.u_factor = kernels::matmul(q_mat, truncate(small, k).u_factor);
    out.v_factor = truncate(small, k).v_factor;
    return out;
}

DenseMatrix reconstruct(const SvdFactors& f, std::size_t k) {
    if (k > f.rank()) throw InvalidRank(k, f.rank());
    DenseMatrix us(f.u_factor.rows(), k);
    DenseMatrix vk(f.v_factor.rows(), k);
    for (std::size_t i = 0; i < us.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) us(i, j) = f.u_factor(i, j) * f.singular_values[j];
    }
    for (std::size_t i = 0; i < vk.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) vk(i, j) = f.v_factor(i, j);
    }
    return kernels::matmul_a_bt(us, vk);
}

}  // namespace consist
