#include "consist/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "consist/rng.hpp"

namespace consist {

SplitPair split(const RatingsMatrix& m, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ValidationError("split ratio must lie strictly between 0 and 1");
    }
    Rng rng(mix_seed(seed, 0x73706c69));  // independent stream for the split
    std::vector<RatingEntry> train_entries;
    std::vector<RatingEntry> test_entries;
    train_entries.reserve(m.n_observed());
    for (const auto& e : m.entries()) {
        if (rng.uniform() < ratio) {
            train_entries.push_back(e);
        } else {
            test_entries.push_back(e);
        }
    }
    SplitPair out;
    out.train = build(m.rows(), m.cols(), std::move(train_entries), m.rating_range());
    out.test = std::move(test_entries);
    out.seed = seed;
    out.ratio = ratio;
    return out;
}

Metrics score(const DenseMatrix& pred, std::span<const RatingEntry> test,
              const RatingsMatrix& train) {
    if (pred.rows() != train.rows() || pred.cols() != train.cols()) {
        throw DimensionMismatch("prediction shape does not match train matrix");
    }
    long double sq_sum = 0.0L;
    long double abs_sum = 0.0L;
    Metrics out;
    for (const auto& e : test) {
        if (train.row_entries(e.row).empty() || train.col_entries(e.col).empty()) {
            ++out.n_unscorable;
            continue;
        }
        const double err = pred(e.row, e.col) - e.value;
        sq_sum += static_cast<long double>(err) * err;
        abs_sum += std::fabs(err);
        ++out.n_scored;
    }
    if (out.n_scored == 0) throw NoScorableCells();
    out.rmse = std::sqrt(static_cast<double>(sq_sum / static_cast<long double>(out.n_scored)));
    out.mae = static_cast<double>(abs_sum / static_cast<long double>(out.n_scored));
    return out;
}

double rmse(const DenseMatrix& pred, std::span<const RatingEntry> test,
            const RatingsMatrix& train) {
    return score(pred, test, train).rmse;
}

double mae(const DenseMatrix& pred, std::span<const RatingEntry> test,
           const RatingsMatrix& train) {
    return score(pred, test, train).mae;
}

BlackboxFactory svd_blackbox_factory() {
    return [](const RatingsMatrix& train, const PipelineConfig& cfg) {
        return std::make_unique<SvdBlackbox>(
            train, cfg.refine_iters,
            TruncatedSvdOptions{cfg.oversample, cfg.power_iters, cfg.seed});
    };
}

namespace {

std::vector<Mode> canonical_mode_order(std::span<const Mode> modes) {
    std::vector<Mode> out;
    for (Mode candidate : {Mode::plain, Mode::sc, Mode::uc}) {
        if (std::find(modes.begin(), modes.end(), candidate) != modes.end()) {
            out.push_back(candidate);
        }
    }
    return out;
}

}  // namespace

SweepReport sweep(const RatingsMatrix& m, std::span<const std::size_t> ks,
                  std::span<const Mode> modes, const PipelineConfig& cfg, double ratio,
                  const BlackboxFactory& factory) {
    if (ks.empty()) throw ValidationError("sweep needs at least one k");
    if (modes.empty()) throw ValidationError("sweep needs at least one mode");

    std::vector<std::size_t> sorted_ks(ks.begin(), ks.end());
    std::sort(sorted_ks.begin(), sorted_ks.end());
    const std::vector<Mode> ordered_modes = canonical_mode_order(modes);

    const SplitPair sp = split(m, ratio, cfg.seed);

    struct Cell {
        Mode mode;
        std::size_t k;
    };
    std::vector<Cell> cells;
    for (Mode mode : ordered_modes) {
        for (std::size_t k : sorted_ks) cells.push_back({mode, k});
    }

    SweepReport out;
    out.reports.resize(cells.size());
    const std::int64_t n_cells = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < n_cells; ++c) {
        const Cell& cell = cells[static_cast<std::size_t>(c)];
        PipelineConfig cell_cfg = cfg;
        cell_cfg.mode = cell.mode;
        cell_cfg.k = cell.k;
        cell_cfg.seed = mix_seed(cfg.seed, (static_cast<std::uint64_t>(cell.mode) << 32) |
                                               static_cast<std::uint64_t>(cell.k));
        auto bb = factory(sp.train, cell_cfg);
        const Prediction pred = complete(sp.train, cell_cfg, *bb);
        const Metrics metrics = score(pred.full, sp.test, sp.train);
        out.reports[static_cast<std::size_t>(c)] =
            EvalReport{cell.mode, cell.k,         metrics.rmse,
                       metrics.mae, metrics.n_scored, metrics.n_unscorable};
    }

    for (Mode mode : ordered_modes) {
        ModeArgmin best{mode, 0, 0.0, 0, 0.0};
        bool first = true;
        for (const auto& r : out.reports) {
            if (r.mode != mode) continue;
            if (first || r.rmse < best.rmse) {
                best.k_rmse = r.k;
                best.rmse = r.rmse;
            }
            if (first || r.mae < best.mae) {
                best.k_mae = r.k;
                best.mae = r.mae;
            }
            first = false;
        }
        out.argmins.push_back(best);
    }
    return out;
}

std::string sweep_csv(const SweepReport& report) {
    std::string out = "mode,k,rmse,mae,n_scored,n_unscorable\n";
    char line[160];
    for (const auto& r : report.reports) {
        std::snprintf(line, sizeof(line), "%s,%zu,%.12g,%.12g,%zu,%zu\n", to_string(r.mode),
                      r.k, r.rmse, r.mae, r.n_scored, r.n_unscorable);
        out += line;
    }
    return out;
}

std::vector<std::size_t> top_n_items(const DenseMatrix& pred, const RatingsMatrix& rated,
                                     std::size_t user, std::size_t n) {
    std::vector<char> has_rated(pred.cols(), 0);
    for (std::size_t idx : rated.row_entries(user)) {
        has_rated[rated.entries()[idx].col] = 1;
    }
    std::vector<std::size_t> items;
    items.reserve(pred.cols());
    for (std::size_t j = 0; j < pred.cols(); ++j) {
        if (!has_rated[j]) items.push_back(j);
    }
    const std::size_t keep = std::min(n, items.size());
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(keep),
                      items.end(), [&](std::size_t a, std::size_t b) {
                          const double pa = pred(user, a);
                          const double pb = pred(user, b);
                          if (pa != pb) return pa > pb;
                          return a < b;
                      });
    items.resize(keep);
    return items;
}

AttackReport attack(const RatingsMatrix& m, std::size_t user, const AttackTransform& transform,
                    const PipelineConfig& cfg, const AttackOptions& opts,
                    const BlackboxFactory& factory) {
    if (user >= m.rows()) throw ValidationError("attacked user index out of range");
    if (cfg.clamp) throw ValidationError("attack requires clamping disabled");
    if (transform.kind == AttackTransform::Kind::scale && !(transform.value > 0.0)) {
        throw ValidationError("scale factor must be positive");
    }

    RatingsMatrix attacked = [&] {
        if (transform.kind == AttackTransform::Kind::scale) {
            std::vector<double> row_scale(m.rows(), 1.0);
            std::vector<double> col_scale(m.cols(), 1.0);
            row_scale[user] = transform.value;
            return scaled(m, row_scale, col_scale);
        }
        std::vector<double> row_shift(m.rows(), 0.0);
        std::vector<double> col_shift(m.cols(), 0.0);
        row_shift[user] = transform.value;
        return shifted(m, row_shift, col_shift);
    }();

    const auto bb_base = factory(m, cfg);
    const Prediction baseline = complete(m, cfg, *bb_base);
    const auto bb_attacked = factory(attacked, cfg);
    const Prediction perturbed = complete(attacked, cfg, *bb_attacked);

    AttackReport out;
    out.attacked_user = user;
    out.transform = transform;
    out.mode = cfg.mode;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i == user) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out.max_abs_delta_others = std::max(
                out.max_abs_delta_others, std::fabs(perturbed.full(i, j) - baseline.full(i, j)));
        }
        if (top_n_items(baseline.full, m, i, opts.top_n) !=
            top_n_items(perturbed.full, m, i, opts.top_n)) {
            ++out.topn_changes;
        }
    }
    return out;
}

}  // namespace consist
