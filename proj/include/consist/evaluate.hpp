#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "consist/pipeline.hpp"
#include "consist/ratings.hpp"

namespace consist {

// Entrywise Bernoulli holdout: train and test partition the observed set.
struct SplitPair {
    RatingsMatrix train;
    std::vector<RatingEntry> test;
    std::uint64_t seed = 0;
    double ratio = 0.0;
};

// Each observed entry lands in train with probability `ratio`, by a seeded
// uniform draw per entry in storage order. Deterministic per seed.
SplitPair split(const RatingsMatrix& m, double ratio, std::uint64_t seed);

struct Metrics {
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n_scored = 0;
    std::size_t n_unscorable = 0;  // test cells in empty train rows/columns
};

// Scores held-out cells against the full prediction matrix. Test cells
// whose row or column has no train observation are excluded and counted.
// Throws NoScorableCells when nothing remains.
Metrics score(const DenseMatrix& pred, std::span<const RatingEntry> test,
              const RatingsMatrix& train);
double rmse(const DenseMatrix& pred, std::span<const RatingEntry> test,
            const RatingsMatrix& train);
double mae(const DenseMatrix& pred, std::span<const RatingEntry> test,
           const RatingsMatrix& train);

struct EvalReport {
    Mode mode = Mode::plain;
    std::size_t k = 0;
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n_scored = 0;
    std::size_t n_unscorable = 0;
};

struct ModeArgmin {
    Mode mode = Mode::plain;
    std::size_t k_rmse = 0;
    double rmse = 0.0;
    std::size_t k_mae = 0;
    double mae = 0.0;
};

struct SweepReport {
    std::vector<EvalReport> reports;  // modes in plain/sc/uc order, k ascending
    std::vector<ModeArgmin> argmins;
};

// Builds the blackbox for one evaluation cell; the train matrix reference
// stays valid for the blackbox's lifetime.
using BlackboxFactory = std::function<std::unique_ptr<CompletionBlackbox>(
    const RatingsMatrix& train, const PipelineConfig& cfg)>;

BlackboxFactory svd_blackbox_factory();

// One EvalReport per (mode, k) on a shared split. Cells are evaluated in
// parallel; reports are merged in (mode, k) order so parallelism never
// changes the output. Per-cell seeds derive from cfg.seed.
SweepReport sweep(const RatingsMatrix& m, std::span<const std::size_t> ks,
                  std::span<const Mode> modes, const PipelineConfig& cfg, double ratio,
                  const BlackboxFactory& factory = svd_blackbox_factory());

// CSV with header mode,k,rmse,mae,n_scored,n_unscorable.
std::string sweep_csv(const SweepReport& report);

struct AttackTransform {
    enum class Kind { scale, shift };
    Kind kind = Kind::scale;
    double value = 1.0;
};

struct AttackOptions {
    std::size_t top_n = 10;
};

struct AttackReport {
    std::size_t attacked_user = 0;
    AttackTransform transform;
    Mode mode = Mode::plain;
    double max_abs_delta_others = 0.0;  // over all cells of users != attacked
    std::size_t topn_changes = 0;       // other users whose top-N list changed
};

// Applies the transform to one user's observed ratings, recomputes
// predictions, and reports how much everyone else's predictions moved.
// Requires clamping disabled; scale requires a positive factor.
AttackReport attack(const RatingsMatrix& m, std::size_t user, const AttackTransform& transform,
                    const PipelineConfig& cfg, const AttackOptions& opts = {},
                    const BlackboxFactory& factory = svd_blackbox_factory());

// Items ranked by predicted value, restricted to items the user has not
// rated; ties broken by item index.
std::vector<std::size_t> top_n_items(const DenseMatrix& pred, const RatingsMatrix& rated,
                                     std::size_t user, std::size_t n);

}  // namespace consist
