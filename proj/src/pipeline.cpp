#include "consist/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace consist {

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::plain: return "plain";
        case Mode::sc: return "sc";
        case Mode::uc: return "uc";
    }
    return "?";
}

const char* to_string(FillPolicy policy) {
    switch (policy) {
        case FillPolicy::item_mean: return "item_mean";
        case FillPolicy::user_mean: return "user_mean";
        case FillPolicy::global_mean: return "global_mean";
    }
    return "?";
}

DenseMatrix svd_blackbox(const DenseMatrix& dense_in, std::size_t k, std::size_t refine_iters,
                         const RatingsMatrix& mask, const TruncatedSvdOptions& opts) {
    DenseMatrix pred = reconstruct(truncated_svd(dense_in, k, opts), k);
    if (refine_iters == 0) return pred;

    if (mask.rows() != dense_in.rows() || mask.cols() != dense_in.cols()) {
        throw DimensionMismatch("mask shape does not match blackbox input");
    }
    std::vector<char> is_observed(dense_in.size(), 0);
    for (const auto& e : mask.entries()) is_observed[e.row * dense_in.cols() + e.col] = 1;

    for (std::size_t round = 0; round < refine_iters; ++round) {
        DenseMatrix working = pred;
        for (const auto& e : mask.entries()) working(e.row, e.col) = dense_in(e.row, e.col);
        DenseMatrix next = reconstruct(truncated_svd(working, k, opts), k);

        // Convergence is judged on absent cells only.
        double delta = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (is_observed[i]) continue;
            delta = std::max(delta, std::fabs(next.data()[i] - pred.data()[i]));
        }
        pred = std::move(next);
        if (delta < 1e-6) break;
    }
    return pred;
}

DenseMatrix fill_dense(const RatingsMatrix& m, FillPolicy policy) {
    if (m.n_observed() == 0) throw EmptyMatrix();
    double global_sum = 0.0;
    for (const auto& e : m.entries()) global_sum += e.value;
    const double global_mean = global_sum / static_cast<double>(m.n_observed());

    DenseMatrix out(m.rows(), m.cols(), global_mean);
    if (policy == FillPolicy::item_mean) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto idxs = m.col_entries(j);
            if (idxs.empty()) continue;
            double sum = 0.0;
            for (std::size_t idx : idxs) sum += m.entries()[idx].value;
            const double mean = sum / static_cast<double>(idxs.size());
            for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = mean;
        }
    } else if (policy == FillPolicy::user_mean) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const auto idxs = m.row_entries(i);
            if (idxs.empty()) continue;
            double sum = 0.0;
            for (std::size_t idx : idxs) sum += m.entries()[idx].value;
            const double mean = sum / static_cast<double>(idxs.size());
            for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = mean;
        }
    }
    for (const auto& e : m.entries()) out(e.row, e.col) = e.value;
    return out;
}

namespace {

void validate_config(const PipelineConfig& cfg) {
    if (cfg.k < 1) throw ValidationError("k must be at least 1");
    if (!(cfg.canonical_tol > 0.0)) throw ValidationError("canonical_tol must be positive");
    if (cfg.clamp && !(cfg.clamp->min < cfg.clamp->max)) {
        throw ValidationError("clamp range must satisfy min < max");
    }
}

void clamp_in_place(DenseMatrix& d, const RatingRange& range) {
    for (std::size_t i = 0; i < d.size(); ++i) {
        d.data()[i] = std::clamp(d.data()[i], range.min, range.max);
    }
}

}  // namespace

Prediction complete(const RatingsMatrix& m, const PipelineConfig& cfg,
                    const CompletionBlackbox& bb) {
    validate_config(cfg);
    const CanonicalOptions canon_opts{cfg.canonical_tol, cfg.canonical_max_iter};

    Prediction out;
    out.config = cfg;
    switch (cfg.mode) {
        case Mode::plain: {
            if (!cfg.fill_policy) throw MissingFillPolicy();
            out.full = bb.complete(fill_dense(m, *cfg.fill_policy), cfg.k);
            break;
        }
        case Mode::sc: {
            const auto canon = sc_canonicalize(m, canon_opts);
            out.full = sc_restore(bb.complete(canon.canonical, cfg.k), canon.transform);
            out.diagnostics = {true, canon.iterations, canon.residual};
            break;
        }
        case Mode::uc: {
            const auto canon = uc_canonicalize(m, canon_opts);
            out.full = uc_restore(bb.complete(canon.canonical, cfg.k), canon.transform);
            out.diagnostics = {true, canon.iterations, canon.residual};
            break;
        }
    }
    if (cfg.clamp) clamp_in_place(out.full, *cfg.clamp);
    return out;
}

Prediction complete_svd(const RatingsMatrix& m, const PipelineConfig& cfg) {
    const SvdBlackbox bb(m, cfg.refine_iters,
                         TruncatedSvdOptions{cfg.oversample, cfg.power_iters, cfg.seed});
    return complete(m, cfg, bb);
}

}  // namespace consist
