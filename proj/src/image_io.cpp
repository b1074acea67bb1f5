// SPDX-License-Identifier: Apache-2.0
#include "gsd/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "byte_order.hpp"
#include "gsd/error.hpp"

namespace gsd {
namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : m_bytes(bytes) {}

    void skip_space_and_comments() {
        while (m_pos < m_bytes.size()) {
            if (m_bytes[m_pos] == '#') {
                while (m_pos < m_bytes.size() && m_bytes[m_pos] != '\n') ++m_pos;
            } else if (std::isspace(m_bytes[m_pos])) {
                ++m_pos;
            } else {
                break;
            }
        }
    }

    std::size_t number() {
        skip_space_and_comments();
        std::size_t value = 0;
        std::size_t digits = 0;
        while (m_pos < m_bytes.size() && std::isdigit(m_bytes[m_pos])) {
            value = value * 10 + (m_bytes[m_pos] - '0');
            if (++digits > 9) throw DataError("PNM header number too large");
            ++m_pos;
        }
        if (digits == 0) throw DataError("malformed PNM header");
        return value;
    }

    std::size_t pos() const { return m_pos; }
    void advance() { ++m_pos; }
    bool at_space() const { return m_pos < m_bytes.size() && std::isspace(m_bytes[m_pos]); }

private:
    std::span<const std::uint8_t> m_bytes;
    std::size_t m_pos = 2;
};

}  // namespace

std::vector<std::uint8_t> encode_pnm(const StegoImage& img) {
    const auto [channels, h, w] = img.dims;
    if (channels != 1 && channels != 3) {
        throw UsageError("PNM output supports 1 or 3 channels, got " + std::to_string(channels));
    }
    if (img.pixels.size() != img.dims.count()) throw DataError("image pixel count does not match dims");
    const std::string header =
        std::string(channels == 1 ? "P5" : "P6") + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const std::size_t plane = h * w;
    out.reserve(out.size() + img.pixels.size());
    for (std::size_t p = 0; p < plane; ++p) {
        for (std::size_t c = 0; c < channels; ++c) out.push_back(img.pixels[c * plane + p]);
    }
    return out;
}

StegoImage decode_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw DataError("not a binary PGM/PPM image");
    }
    const std::size_t channels = bytes[1] == '5' ? 1 : 3;
    HeaderReader reader(bytes);
    const std::size_t w = reader.number();
    const std::size_t h = reader.number();
    const std::size_t maxval = reader.number();
    if (w == 0 || h == 0) throw DataError("PNM image has zero size");
    if (maxval != 255) throw DataError("only maxval 255 is supported, got " + std::to_string(maxval));
    if (!reader.at_space()) throw DataError("malformed PNM header");
    reader.advance();

    Dims dims{channels, h, w};
    const std::size_t offset = reader.pos();
    if (bytes.size() - offset < dims.count()) throw DataError("PNM pixel data truncated");
    StegoImage img{dims, std::vector<std::uint8_t>(dims.count())};
    const std::size_t plane = h * w;
    for (std::size_t p = 0; p < plane; ++p) {
        for (std::size_t c = 0; c < channels; ++c) img.pixels[c * plane + p] = bytes[offset + p * channels + c];
    }
    return img;
}

namespace {

constexpr std::uint8_t kGridMagic[4] = {'G', 'S', 'D', 'F'};
constexpr std::uint16_t kGridVersion = 1;
constexpr std::size_t kGridHeader = 4 + 2 + 3 * 4;

}  // namespace

bool is_grid_file(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 4 && std::equal(kGridMagic, kGridMagic + 4, bytes.begin());
}

std::vector<std::uint8_t> encode_grid(const Grid& g) {
    std::vector<std::uint8_t> out(kGridMagic, kGridMagic + 4);
    out.reserve(kGridHeader + 8 * g.size());
    detail::put_u16(out, kGridVersion);
    detail::put_u32(out, static_cast<std::uint32_t>(g.dims().channels));
    detail::put_u32(out, static_cast<std::uint32_t>(g.dims().height));
    detail::put_u32(out, static_cast<std::uint32_t>(g.dims().width));
    for (double v : g.values()) detail::put_f64(out, v);
    return out;
}

Grid decode_grid(std::span<const std::uint8_t> bytes) {
    if (!is_grid_file(bytes) || bytes.size() < kGridHeader) throw DataError("not a float grid file");
    const auto version = detail::get_le(bytes, 4, 2);
    if (version != kGridVersion) throw DataError("unsupported grid file version " + std::to_string(version));
    const Dims dims{detail::get_le(bytes, 6, 4), detail::get_le(bytes, 10, 4), detail::get_le(bytes, 14, 4)};
    if (!dims.valid()) throw DataError("grid file has zero size");
    if (bytes.size() != kGridHeader + 8 * dims.count()) {
        throw DataError("grid file of dims " + to_string(dims) + " has wrong length " + std::to_string(bytes.size()));
    }
    Grid g(dims);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = std::bit_cast<double>(detail::get_le(bytes, kGridHeader + 8 * i, 8));
    }
    return g;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing " + path.string());
}

void write_pnm(const std::filesystem::path& path, const StegoImage& img) { write_file(path, encode_pnm(img)); }

StegoImage read_pnm(const std::filesystem::path& path) { return decode_pnm(read_file(path)); }

}  // namespace gsd
