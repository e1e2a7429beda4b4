#include "support/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "consist/errors.hpp"
#include "consist/rng.hpp"

namespace consist::testing {

namespace {

constexpr std::size_t kLatentRank = 16;

// Cumulative table for weighted index draws.
class WeightedSampler {
public:
    explicit WeightedSampler(std::vector<double> weights) : cumulative_(std::move(weights)) {
        std::partial_sum(cumulative_.begin(), cumulative_.end(), cumulative_.begin());
    }

    std::size_t draw(Rng& rng) const {
        const double target = rng.uniform() * cumulative_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - cumulative_.begin(), static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
    }

private:
    std::vector<double> cumulative_;
};

std::vector<double> power_law_weights(std::size_t n, double offset, double exponent, Rng& rng) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 1.0 / std::pow(static_cast<double>(i) + offset, exponent);
    }
    for (std::size_t i = n; i > 1; --i) {
        std::swap(w[i - 1], w[rng.next_u64() % i]);
    }
    return w;
}

}  // namespace

std::vector<RatingEntry> surrogate_ratings(const SurrogateSpec& spec) {
    Rng rng(mix_seed(spec.seed, 0x5d5));
    const std::size_t cells = spec.n_users * spec.n_items;
    if (spec.n_entries > cells / 2) {
        throw ValidationError("surrogate density too high for rejection sampling");
    }

    const WeightedSampler users(power_law_weights(spec.n_users, 12.0, 0.75, rng));
    const WeightedSampler items(power_law_weights(spec.n_items, 8.0, 0.95, rng));

    std::vector<double> user_bias(spec.n_users), item_bias(spec.n_items);
    for (double& b : user_bias) b = 0.5 * rng.gaussian();
    for (double& b : item_bias) b = 0.55 * rng.gaussian();

    std::vector<double> user_factors(spec.n_users * kLatentRank);
    std::vector<double> item_factors(spec.n_items * kLatentRank);
    for (double& z : user_factors) z = rng.gaussian();
    for (double& z : item_factors) z = rng.gaussian();
    std::vector<double> factor_scale(kLatentRank);
    for (std::size_t f = 0; f < kLatentRank; ++f) {
        factor_scale[f] = 0.55 * std::pow(0.88, static_cast<double>(f));
    }

    std::unordered_set<std::uint64_t> taken;
    taken.reserve(spec.n_entries * 2);
    std::vector<RatingEntry> entries;
    entries.reserve(spec.n_entries);
    while (entries.size() < spec.n_entries) {
        const std::size_t u = users.draw(rng);
        const std::size_t i = items.draw(rng);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(i);
        if (!taken.insert(key).second) continue;

        double latent = 0.0;
        for (std::size_t f = 0; f < kLatentRank; ++f) {
            latent += factor_scale[f] * user_factors[u * kLatentRank + f] *
                      item_factors[i * kLatentRank + f];
        }
        const double raw = 3.6 + user_bias[u] + item_bias[i] + latent + 0.65 * rng.gaussian();
        const double rating = std::clamp(std::round(raw), 1.0, 5.0);
        entries.push_back({u, i, rating});
    }
    return entries;
}

RatingsMatrix surrogate_matrix(const SurrogateSpec& spec) {
    return build(spec.n_users, spec.n_items, surrogate_ratings(spec), RatingRange{1.0, 5.0});
}

namespace {

void write_lines(const std::filesystem::path& path, const std::vector<RatingEntry>& entries,
                 const char* pattern) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    char line[96];
    long timestamp = 874'700'000;
    for (const auto& e : entries) {
        std::snprintf(line, sizeof(line), pattern, e.row + 1, e.col + 1,
                      static_cast<long>(e.value), timestamp++);
        out << line;
    }
}

}  // namespace

void write_movielens_100k_file(const std::filesystem::path& path,
                               const std::vector<RatingEntry>& entries) {
    write_lines(path, entries, "%zu\t%zu\t%ld\t%ld\n");
}

void write_movielens_1m_file(const std::filesystem::path& path,
                             const std::vector<RatingEntry>& entries) {
    write_lines(path, entries, "%zu::%zu::%ld::%ld\n");
}

RatingsMatrix subsample_top(const RatingsMatrix& m, std::size_t n_rows, std::size_t n_cols) {
    auto top_indices = [](const std::vector<std::size_t>& counts, std::size_t keep) {
        std::vector<std::size_t> order(counts.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return counts[a] > counts[b];
        });
        order.resize(std::min(keep, order.size()));
        std::sort(order.begin(), order.end());
        return order;
    };

    std::vector<std::size_t> row_counts(m.rows(), 0);
    for (const auto& e : m.entries()) ++row_counts[e.row];
    const auto rows = top_indices(row_counts, n_rows);
    std::vector<std::size_t> row_of(m.rows(), SIZE_MAX);
    for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = i;

    std::vector<std::size_t> col_counts(m.cols(), 0);
    for (const auto& e : m.entries()) {
        if (row_of[e.row] != SIZE_MAX) ++col_counts[e.col];
    }
    const auto cols = top_indices(col_counts, n_cols);
    std::vector<std::size_t> col_of(m.cols(), SIZE_MAX);
    for (std::size_t j = 0; j < cols.size(); ++j) col_of[cols[j]] = j;

    std::vector<RatingEntry> entries;
    for (const auto& e : m.entries()) {
        if (row_of[e.row] != SIZE_MAX && col_of[e.col] != SIZE_MAX) {
            entries.push_back({row_of[e.row], col_of[e.col], e.value});
        }
    }
    return build(rows.size(), cols.size(), std::move(entries), m.rating_range());
}

}  // namespace consist::testing
