#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "consist/ratings.hpp"

namespace consist {

inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility record written alongside every report: two runs with
// identical manifests produce identical report payloads.
struct RunManifest {
    std::string command;          // subcommand name
    std::string resolved_config;  // JSON object, already serialized
    std::uint64_t seed = 0;
    std::size_t dataset_entries = 0;
    std::string dataset_checksum;  // fnv1a-64 over entries, hex
    std::string tool_version = kToolVersion;
};

// FNV-1a over (row, col, value bits) in storage order.
std::string dataset_checksum(const RatingsMatrix& m);

std::string to_json(const RunManifest& manifest);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace consist
