// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

namespace gsd {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_hex(std::span<const std::uint8_t> bytes);

/// Everything needed to rerun a command byte-exactly.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json config;  // merged flags + config file
    std::string checkpoint_sha256;  // empty when no checkpoint was involved
    std::uint64_t seed = 0;
    std::string bit_order = "msb-first";
    std::string tool_version = kToolVersion;

    nlohmann::ordered_json to_json() const;
    void write(const std::filesystem::path& path) const;
};

}  // namespace gsd
