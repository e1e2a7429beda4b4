#include "consist/canonical.hpp"

#include <cmath>
#include <string>

namespace consist {

namespace {

void validate_options(const CanonicalOptions& opts) {
    if (!(opts.tol > 0.0)) throw ValidationError("tol must be positive");
    if (opts.max_iter < 1) throw ValidationError("max_iter must be at least 1");
}

// Max abs observed row/column sum of M[i,j] + u[i] + v[j].
double constraint_residual(const RatingsMatrix& m, const std::vector<double>& u,
                           const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t idx : m.row_entries(i)) {
            const auto& e = m.entries()[idx];
            sum += e.value + u[i] + v[e.col];
        }
        worst = std::max(worst, std::fabs(sum));
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t idx : m.col_entries(j)) {
            const auto& e = m.entries()[idx];
            sum += e.value + u[e.row] + v[j];
        }
        worst = std::max(worst, std::fabs(sum));
    }
    return worst;
}

// Move the per-component gauge constant so each component's col shifts
// sum to zero. Leaves M + u + v unchanged up to rounding.
void gauge_fix(const RatingsMatrix& m, const ComponentLabeling& labels, std::vector<double>& u,
               std::vector<double>& v) {
    std::vector<double> col_sum(labels.n_components, 0.0);
    std::vector<std::size_t> col_count(labels.n_components, 0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (labels.col_empty[j]) continue;
        col_sum[labels.col_component[j]] += v[j];
        ++col_count[labels.col_component[j]];
    }
    std::vector<double> shift(labels.n_components, 0.0);
    for (std::size_t c = 0; c < labels.n_components; ++c) {
        if (col_count[c] > 0) shift[c] = col_sum[c] / static_cast<double>(col_count[c]);
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (!labels.col_empty[j]) v[j] -= shift[labels.col_component[j]];
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (!labels.row_empty[i]) u[i] += shift[labels.row_component[i]];
    }
}

struct ShiftSolve {
    std::vector<double> u, v;
    std::size_t iterations = 0;
    double residual = 0.0;
};

// Alternating means on the zero-sum constraint system, then gauge fixing.
ShiftSolve solve_shifts(const RatingsMatrix& m, const CanonicalOptions& opts) {
    validate_options(opts);
    if (m.n_observed() == 0) throw EmptyMatrix();

    const ComponentLabeling labels = components(m);
    ShiftSolve s;
    s.u.assign(m.rows(), 0.0);
    s.v.assign(m.cols(), 0.0);

    for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const auto idxs = m.row_entries(i);
            if (idxs.empty()) continue;
            double sum = 0.0;
            for (std::size_t idx : idxs) {
                const auto& e = m.entries()[idx];
                sum += e.value + s.v[e.col];
            }
            s.u[i] = -sum / static_cast<double>(idxs.size());
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto idxs = m.col_entries(j);
            if (idxs.empty()) continue;
            double sum = 0.0;
            for (std::size_t idx : idxs) {
                const auto& e = m.entries()[idx];
                sum += e.value + s.u[e.row];
            }
            s.v[j] = -sum / static_cast<double>(idxs.size());
        }
        s.iterations = iter;
        s.residual = constraint_residual(m, s.u, s.v);
        if (s.residual <= opts.tol) {
            gauge_fix(m, labels, s.u, s.v);
            s.residual = constraint_residual(m, s.u, s.v);
            if (s.residual <= opts.tol) return s;
        }
    }
    throw NoConvergence(s.residual, opts.max_iter);
}

}  // namespace

CanonicalResult<ShiftVectors> sc_canonicalize(const RatingsMatrix& m,
                                              const CanonicalOptions& opts) {
    ShiftSolve s = solve_shifts(m, opts);
    CanonicalResult<ShiftVectors> out;
    out.canonical = DenseMatrix(m.rows(), m.cols(), 0.0);
    for (const auto& e : m.entries()) {
        out.canonical(e.row, e.col) = e.value + s.u[e.row] + s.v[e.col];
    }
    out.transform = ShiftVectors{std::move(s.u), std::move(s.v)};
    out.iterations = s.iterations;
    out.residual = s.residual;
    return out;
}

DenseMatrix sc_restore(const DenseMatrix& predictions, const ShiftVectors& t) {
    if (predictions.rows() != t.row_shift.size() || predictions.cols() != t.col_shift.size()) {
        throw DimensionMismatch("predictions shape does not match shift vectors");
    }
    DenseMatrix out(predictions.rows(), predictions.cols());
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            out(i, j) = predictions(i, j) - t.row_shift[i] - t.col_shift[j];
        }
    }
    return out;
}

CanonicalResult<ScaleVectors> uc_canonicalize(const RatingsMatrix& m,
                                              const CanonicalOptions& opts) {
    for (const auto& e : m.entries()) {
        if (!(e.value > 0.0)) throw NonPositiveEntry(e.row, e.col, e.value);
    }
    std::vector<RatingEntry> logged = m.entries();
    for (auto& e : logged) e.value = std::log(e.value);
    const RatingsMatrix log_m = build(m.rows(), m.cols(), std::move(logged));

    ShiftSolve s = solve_shifts(log_m, opts);

    CanonicalResult<ScaleVectors> out;
    out.transform.row_scale.resize(m.rows());
    out.transform.col_scale.resize(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) out.transform.row_scale[i] = std::exp(s.u[i]);
    for (std::size_t j = 0; j < m.cols(); ++j) out.transform.col_scale[j] = std::exp(s.v[j]);

    out.canonical = DenseMatrix(m.rows(), m.cols(), 1.0);
    for (const auto& e : m.entries()) {
        out.canonical(e.row, e.col) =
            out.transform.row_scale[e.row] * e.value * out.transform.col_scale[e.col];
    }
    out.iterations = s.iterations;
    out.residual = s.residual;
    return out;
}

DenseMatrix uc_restore(const DenseMatrix& predictions, const ScaleVectors& t) {
    if (predictions.rows() != t.row_scale.size() || predictions.cols() != t.col_scale.size()) {
        throw DimensionMismatch("predictions shape does not match scale vectors");
    }
    DenseMatrix out(predictions.rows(), predictions.cols());
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            out(i, j) = predictions(i, j) / (t.row_scale[i] * t.col_scale[j]);
        }
    }
    return out;
}

}  // namespace consist
