// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gsd/grid.hpp"

namespace gsd {

/// Ordered secret bits, each 0 or 1.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::vector<std::uint8_t> bits);

    std::size_t size() const { return m_bits.size(); }
    std::uint8_t operator[](std::size_t i) const { return m_bits[i]; }
    const std::vector<std::uint8_t>& bits() const { return m_bits; }

    BitVector complement() const;

    /// Reads `count` bits MSB-first. Throws DataError naming the required
    /// byte count when `bytes` is too short; excess bytes are ignored.
    static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t count);
    /// Packs MSB-first, zero-padding the final byte.
    std::vector<std::uint8_t> to_bytes() const;

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::vector<std::uint8_t> m_bits;
};

std::size_t bytes_for_bits(std::size_t bits);

/// Maps bit i to a DCT coefficient. Without a permutation bit i sits at
/// flat coefficient index i (channel-major, then row-major). A permutation
/// sends bit i to coefficient permutation[i].
struct EmbedLayout {
    double amplitude = 1.0;
    std::vector<std::size_t> permutation;

    std::size_t position(std::size_t bit) const { return permutation.empty() ? bit : permutation[bit]; }
    /// Throws UsageError if amplitude <= 0 or the permutation is not a bijection on [0, n).
    void validate(std::size_t n) const;
};

/// Coefficient tensor with +amplitude for bit 1 and -amplitude for bit 0.
Grid embed_coefficients(const BitVector& d, Dims dims, const EmbedLayout& layout = {});

/// Stego latent: idct2(embed_coefficients(d)).
Grid embed(const BitVector& d, Dims dims, const EmbedLayout& layout = {});

/// bit = ceil((sign(c) + 1) / 2) with sign(0) = 0, so a zero coefficient reads as 1.
BitVector extract_from_coefficients(const Grid& coeffs, const EmbedLayout& layout = {});

/// extract_from_coefficients(dct2(z)).
BitVector extract(const Grid& z, const EmbedLayout& layout = {});

/// Quantized image, channel-major like Grid, values 0..255.
struct StegoImage {
    Dims dims;
    std::vector<std::uint8_t> pixels;

    /// Throws DataError if any value lies outside [0, 255] or the count is wrong.
    static StegoImage from_values(Dims dims, std::span<const int> values);

    friend bool operator==(const StegoImage&, const StegoImage&) = default;
};

/// q = clamp(round((x + 1) * 127.5), 0, 255), rounding half away from zero.
StegoImage quantize(const Grid& x);

/// x = q / 127.5 - 1.
Grid dequantize(const StegoImage& q);

}  // namespace gsd
