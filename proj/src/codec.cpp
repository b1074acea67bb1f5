// SPDX-License-Identifier: Apache-2.0
#include "gsd/codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsd/dct.hpp"
#include "gsd/error.hpp"

namespace gsd {

BitVector::BitVector(std::vector<std::uint8_t> bits) : m_bits(std::move(bits)) {
    for (std::uint8_t b : m_bits) {
        if (b > 1) throw UsageError("bit values must be 0 or 1");
    }
}

BitVector BitVector::complement() const {
    std::vector<std::uint8_t> out(m_bits.size());
    std::transform(m_bits.begin(), m_bits.end(), out.begin(), [](std::uint8_t b) { return std::uint8_t(1 - b); });
    return BitVector(std::move(out));
}

std::size_t bytes_for_bits(std::size_t bits) { return (bits + 7) / 8; }

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t count) {
    const std::size_t needed = bytes_for_bits(count);
    if (bytes.size() < needed) {
        throw DataError("payload of " + std::to_string(count) + " bits requires " + std::to_string(needed) +
                        " bytes, got " + std::to_string(bytes.size()));
    }
    std::vector<std::uint8_t> bits(count);
    for (std::size_t i = 0; i < count; ++i) {
        bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    }
    return BitVector(std::move(bits));
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
    std::vector<std::uint8_t> out(bytes_for_bits(m_bits.size()), 0);
    for (std::size_t i = 0; i < m_bits.size(); ++i) {
        out[i / 8] |= static_cast<std::uint8_t>(m_bits[i] << (7 - i % 8));
    }
    return out;
}

void EmbedLayout::validate(std::size_t n) const {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw UsageError("embedding amplitude must be positive and finite");
    }
    if (permutation.empty()) return;
    if (permutation.size() != n) {
        throw UsageError("layout permutation has " + std::to_string(permutation.size()) + " entries, expected " +
                         std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (std::size_t p : permutation) {
        if (p >= n || seen[p]) throw UsageError("layout permutation is not a bijection");
        seen[p] = true;
    }
}

Grid embed_coefficients(const BitVector& d, Dims dims, const EmbedLayout& layout) {
    if (!dims.valid()) throw UsageError("embed: invalid dims " + to_string(dims));
    if (d.size() != dims.count()) {
        throw UsageError("embed: payload has " + std::to_string(d.size()) + " bits but " + to_string(dims) +
                         " holds " + std::to_string(dims.count()));
    }
    layout.validate(d.size());
    Grid coeffs(dims);
    for (std::size_t i = 0; i < d.size(); ++i) {
        coeffs[layout.position(i)] = d[i] ? layout.amplitude : -layout.amplitude;
    }
    return coeffs;
}

Grid embed(const BitVector& d, Dims dims, const EmbedLayout& layout) {
    return idct2(embed_coefficients(d, dims, layout));
}

BitVector extract_from_coefficients(const Grid& coeffs, const EmbedLayout& layout) {
    layout.validate(coeffs.size());
    std::vector<std::uint8_t> bits(coeffs.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const double c = coeffs[layout.position(i)];
        const double sign = c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
        bits[i] = static_cast<std::uint8_t>(std::ceil((sign + 1.0) / 2.0));
    }
    return BitVector(std::move(bits));
}

BitVector extract(const Grid& z, const EmbedLayout& layout) { return extract_from_coefficients(dct2(z), layout); }

StegoImage StegoImage::from_values(Dims dims, std::span<const int> values) {
    if (!dims.valid() || values.size() != dims.count()) {
        throw DataError("image value count does not match dims " + to_string(dims));
    }
    StegoImage img{dims, std::vector<std::uint8_t>(values.size())};
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0 || values[i] > 255) {
            throw DataError("pixel value " + std::to_string(values[i]) + " outside [0, 255]");
        }
        img.pixels[i] = static_cast<std::uint8_t>(values[i]);
    }
    return img;
}

StegoImage quantize(const Grid& x) {
    require_finite(x, "quantize");
    StegoImage img{x.dims(), std::vector<std::uint8_t>(x.size())};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double q = std::round((x[i] + 1.0) * 127.5);
        img.pixels[i] = static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
    }
    return img;
}

Grid dequantize(const StegoImage& q) {
    if (q.pixels.size() != q.dims.count()) throw DataError("stego image pixel count does not match dims");
    Grid x(q.dims);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = q.pixels[i] / 127.5 - 1.0;
    return x;
}

}  // namespace gsd
