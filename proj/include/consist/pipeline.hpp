#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "consist/canonical.hpp"
#include "consist/dense.hpp"
#include "consist/ratings.hpp"
#include "consist/svd.hpp"

namespace consist {

// plain: fill absent cells and hand the blackbox the raw matrix.
// sc: run the blackbox in the shift-invariant canonical space.
// uc: run the blackbox in the scale-invariant canonical space.
enum class Mode { plain, sc, uc };

enum class FillPolicy { item_mean, user_mean, global_mean };

const char* to_string(Mode mode);
const char* to_string(FillPolicy policy);

struct PipelineConfig {
    Mode mode = Mode::plain;
    std::size_t k = 25;
    std::optional<FillPolicy> fill_policy = FillPolicy::item_mean;  // plain mode only
    std::optional<RatingRange> clamp;
    double canonical_tol = 1e-10;
    std::size_t canonical_max_iter = 10'000;
    std::size_t refine_iters = 0;  // 0 = single pass
    std::uint64_t seed = 0;
    std::size_t oversample = 10;
    std::size_t power_iters = 4;
};

// The system whose consistency is imposed externally: any map from a fully
// filled matrix and a rank to a predicted matrix of the same shape. Must be
// safe to invoke concurrently on distinct inputs.
class CompletionBlackbox {
public:
    virtual ~CompletionBlackbox() = default;
    virtual DenseMatrix complete(const DenseMatrix& dense_in, std::size_t k) const = 0;
};

// Rank-k truncated-SVD reconstruction. With refine_iters > 0, absent cells
// are re-filled with their current predictions, observed cells are reset to
// their inputs, and the decomposition repeats until the loop count runs out
// or the max abs change on absent cells drops below 1e-6.
DenseMatrix svd_blackbox(const DenseMatrix& dense_in, std::size_t k, std::size_t refine_iters,
                         const RatingsMatrix& mask, const TruncatedSvdOptions& opts = {});

// svd_blackbox bound to a mask and options. The mask must outlive the
// blackbox; callers hold the ratings matrix for the duration of a run.
class SvdBlackbox final : public CompletionBlackbox {
public:
    SvdBlackbox(const RatingsMatrix& mask, std::size_t refine_iters,
                const TruncatedSvdOptions& opts)
        : mask_(&mask), refine_iters_(refine_iters), opts_(opts) {}

    DenseMatrix complete(const DenseMatrix& dense_in, std::size_t k) const override {
        return svd_blackbox(dense_in, k, refine_iters_, *mask_, opts_);
    }

private:
    const RatingsMatrix* mask_;
    std::size_t refine_iters_;
    TruncatedSvdOptions opts_;
};

struct PredictionDiagnostics {
    bool canonicalized = false;
    std::size_t canonical_iterations = 0;
    double canonical_residual = 0.0;
};

struct Prediction {
    DenseMatrix full;  // predicted value for every cell, observed included
    PipelineConfig config;
    PredictionDiagnostics diagnostics;
};

// Materialize the plain-mode input: observed cells keep their rating,
// absent cells get the policy mean (global mean when a row/column has no
// observations). Throws EmptyMatrix.
DenseMatrix fill_dense(const RatingsMatrix& m, FillPolicy policy);

// The wrapper construction: canonicalize per cfg.mode, run the blackbox in
// that space, transform the result back, clamp if configured. Observed
// cells keep the blackbox's reconstruction; they are not reset to inputs.
Prediction complete(const RatingsMatrix& m, const PipelineConfig& cfg,
                    const CompletionBlackbox& bb);

// complete() with an SvdBlackbox assembled from cfg (mask = m).
Prediction complete_svd(const RatingsMatrix& m, const PipelineConfig& cfg);

}  // namespace consist
