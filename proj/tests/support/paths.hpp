#pragma once

#include <cstdlib>
#include <filesystem>
#include <stdexcept>

namespace consist::testing {

inline std::filesystem::path golden_dir() {
    if (const char* env = std::getenv("CONSIST_GOLDEN_DIR")) return env;
    for (const char* candidate : {"tests/golden", "../tests/golden", "../../tests/golden"}) {
        if (std::filesystem::exists(candidate)) return candidate;
    }
    throw std::runtime_error("golden directory not found; set CONSIST_GOLDEN_DIR");
}

}  // namespace consist::testing
