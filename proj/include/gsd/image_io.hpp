// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gsd/codec.hpp"

namespace gsd {

/// Binary PGM (P5) for 1-channel images, PPM (P6) for 3-channel, maxval 255.
std::vector<std::uint8_t> encode_pnm(const StegoImage& img);
StegoImage decode_pnm(std::span<const std::uint8_t> bytes);

void write_pnm(const std::filesystem::path& path, const StegoImage& img);
StegoImage read_pnm(const std::filesystem::path& path);

/// Unquantized images: "GSDF", u16 version, u32 C, H, W, then C*H*W
/// little-endian f64 values in channel-major order.
std::vector<std::uint8_t> encode_grid(const Grid& g);
Grid decode_grid(std::span<const std::uint8_t> bytes);
bool is_grid_file(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace gsd
