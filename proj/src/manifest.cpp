#include "consist/manifest.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace consist {

std::string dataset_checksum(const RatingsMatrix& m) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto feed = [&hash](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            hash ^= (word >> (8 * b)) & 0xffULL;
            hash *= 0x100000001b3ULL;
        }
    };
    feed(m.rows());
    feed(m.cols());
    for (const auto& e : m.entries()) {
        feed(e.row);
        feed(e.col);
        feed(std::bit_cast<std::uint64_t>(e.value));
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

std::string to_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["config"] = nlohmann::ordered_json::parse(manifest.resolved_config.empty()
                                                    ? "{}"
                                                    : manifest.resolved_config);
    j["seed"] = manifest.seed;
    j["dataset"] = {{"entries", manifest.dataset_entries},
                    {"checksum", manifest.dataset_checksum}};
    j["tool_version"] = manifest.tool_version;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_json(manifest);
}

}  // namespace consist
