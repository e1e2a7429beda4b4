#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "consist/ratings.hpp"

namespace consist {

// Original dataset ids per internal index, in first-appearance order.
// Human-facing output (attack reports, top-N lists) uses these.
struct IdMaps {
    std::vector<std::string> user_ids;
    std::vector<std::string> item_ids;
};

struct LoadedRatings {
    RatingsMatrix matrix;
    IdMaps ids;
};

// Tab-separated user<TAB>item<TAB>rating<TAB>timestamp lines; ratings in
// [1,5]; timestamps discarded; rating_range set to (1,5). Warns on stderr
// when the entry count differs from the published 100,000.
LoadedRatings load_movielens_100k(const std::filesystem::path& path);

// UserID::MovieID::Rating::Timestamp lines; otherwise as above, with the
// published count 1,000,209.
LoadedRatings load_movielens_1m(const std::filesystem::path& path);

// Comma-separated user,item,rating lines with arbitrary string ids.
// rating_range stays unset.
LoadedRatings load_csv(const std::filesystem::path& path, bool has_header);

// CSV user,item,rating with original ids, exact value round trip.
void export_csv(const RatingsMatrix& m, const IdMaps& ids, const std::filesystem::path& path);

// Index of an original user id, if present.
std::optional<std::size_t> find_user(const IdMaps& ids, const std::string& user_id);

// Same matrix with a different declared rating range.
RatingsMatrix with_rating_range(const RatingsMatrix& m, std::optional<RatingRange> range);

}  // namespace consist
