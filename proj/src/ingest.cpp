#include "consist/ingest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <unordered_map>

namespace consist {

namespace {

struct Remapper {
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::string> ids;

    std::size_t intern(const std::string& id) {
        auto [it, inserted] = index.try_emplace(id, ids.size());
        if (inserted) ids.push_back(id);
        return it->second;
    }
};

double parse_rating(const std::string& token, std::size_t line_no) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(line_no, "bad rating '" + token + "'");
    }
    return value;
}

std::vector<std::string> split_on(const std::string& line, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + sep.size();
    }
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

LoadedRatings load_movielens(const std::filesystem::path& path, const std::string& sep,
                             std::size_t expected_entries, const char* dataset_name) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    Remapper users, items;
    std::vector<RatingEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_on(line, sep);
        if (fields.size() != 4) {
            throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
        }
        const double rating = parse_rating(fields[2], line_no);
        if (rating < 1.0 || rating > 5.0) {
            throw ParseError(line_no, "rating " + fields[2] + " outside [1,5]");
        }
        entries.push_back({users.intern(fields[0]), items.intern(fields[1]), rating});
    }
    if (entries.size() != expected_entries) {
        std::fprintf(stderr, "warning: %s has %zu entries, expected %zu\n", dataset_name,
                     entries.size(), expected_entries);
    }
    LoadedRatings out;
    out.matrix = build(users.ids.size(), items.ids.size(), std::move(entries),
                       RatingRange{1.0, 5.0});
    out.ids = IdMaps{std::move(users.ids), std::move(items.ids)};
    return out;
}

}  // namespace

LoadedRatings load_movielens_100k(const std::filesystem::path& path) {
    return load_movielens(path, "\t", 100'000, "MovieLens 100k");
}

LoadedRatings load_movielens_1m(const std::filesystem::path& path) {
    return load_movielens(path, "::", 1'000'209, "MovieLens 1M");
}

LoadedRatings load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    Remapper users, items;
    std::vector<RatingEntry> entries;
    std::unordered_map<std::uint64_t, std::size_t> first_line_of;
    std::string line;
    std::size_t line_no = 0;
    bool skipped_header = !has_header;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        const auto fields = split_on(line, ",");
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
        }
        const std::size_t row = users.intern(fields[0]);
        const std::size_t col = items.intern(fields[1]);
        const double rating = parse_rating(fields[2], line_no);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(row) << 32) | static_cast<std::uint64_t>(col);
        auto [it, inserted] = first_line_of.try_emplace(key, line_no);
        if (!inserted) {
            throw DuplicateEntry(fields[0], fields[1], line_no, it->second);
        }
        entries.push_back({row, col, rating});
    }
    LoadedRatings out;
    out.matrix = build(users.ids.size(), items.ids.size(), std::move(entries));
    out.ids = IdMaps{std::move(users.ids), std::move(items.ids)};
    return out;
}

void export_csv(const RatingsMatrix& m, const IdMaps& ids, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "user,item,rating\n";
    char value[40];
    for (const auto& e : m.entries()) {
        std::snprintf(value, sizeof(value), "%.17g", e.value);
        out << ids.user_ids[e.row] << ',' << ids.item_ids[e.col] << ',' << value << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

std::optional<std::size_t> find_user(const IdMaps& ids, const std::string& user_id) {
    for (std::size_t i = 0; i < ids.user_ids.size(); ++i) {
        if (ids.user_ids[i] == user_id) return i;
    }
    return std::nullopt;
}

RatingsMatrix with_rating_range(const RatingsMatrix& m, std::optional<RatingRange> range) {
    return build(m.rows(), m.cols(), m.entries(), range);
}

}  // namespace consist
