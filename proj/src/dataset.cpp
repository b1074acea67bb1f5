// SPDX-License-Identifier: Apache-2.0
#include "gsd/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsd/error.hpp"
#include "gsd/rng.hpp"

namespace gsd {
namespace {

double uniform(SeededRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

void clamp_unit(Grid& g) {
    for (double& v : g.values()) v = std::clamp(v, -1.0, 1.0);
}

Grid make_blobs(SeededRng& rng, Dims dims) {
    Grid g(dims);
    const double h = static_cast<double>(dims.height);
    const double w = static_cast<double>(dims.width);
    const double max_width = std::max(1.0, std::min(h, w) / 4.0);
    for (std::size_t c = 0; c < dims.channels; ++c) {
        auto plane = g.channel(c);
        std::fill(plane.begin(), plane.end(), uniform(rng, -1.0, -0.4));
    }
    const int blob_count = 1 + static_cast<int>(rng.index(4));
    for (int b = 0; b < blob_count; ++b) {
        const double cy = uniform(rng, 0.0, h - 1.0);
        const double cx = uniform(rng, 0.0, w - 1.0);
        const double width = uniform(rng, 1.0, max_width);
        const double sign = rng.uniform() < 0.75 ? 1.0 : -1.0;
        for (std::size_t c = 0; c < dims.channels; ++c) {
            const double amp = sign * uniform(rng, 0.6, 1.8);
            for (std::size_t y = 0; y < dims.height; ++y) {
                for (std::size_t x = 0; x < dims.width; ++x) {
                    const double dy = static_cast<double>(y) - cy;
                    const double dx = static_cast<double>(x) - cx;
                    g.at(c, y, x) += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
                }
            }
        }
    }
    clamp_unit(g);
    return g;
}

Grid make_gradient(SeededRng& rng, Dims dims) {
    Grid g(dims);
    const double theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    for (std::size_t c = 0; c < dims.channels; ++c) {
        const double slope = uniform(rng, 0.5, 1.0);
        const double offset = uniform(rng, -0.3, 0.3);
        for (std::size_t y = 0; y < dims.height; ++y) {
            const double v = dims.height > 1 ? 2.0 * y / (dims.height - 1.0) - 1.0 : 0.0;
            for (std::size_t x = 0; x < dims.width; ++x) {
                const double u = dims.width > 1 ? 2.0 * x / (dims.width - 1.0) - 1.0 : 0.0;
                g.at(c, y, x) = slope * (ct * u + st * v) + offset;
            }
        }
    }
    clamp_unit(g);
    return g;
}

Grid make_checkers(SeededRng& rng, Dims dims) {
    Grid g(dims);
    const std::size_t max_cell = std::max<std::size_t>(1, std::min(dims.height, dims.width) / 2);
    const std::size_t cell = 1 + rng.index(max_cell);
    const std::size_t oy = rng.index(cell);
    const std::size_t ox = rng.index(cell);
    for (std::size_t c = 0; c < dims.channels; ++c) {
        const double lo = uniform(rng, -1.0, 0.0);
        const double hi = std::min(1.0, lo + uniform(rng, 0.5, 1.5));
        for (std::size_t y = 0; y < dims.height; ++y) {
            for (std::size_t x = 0; x < dims.width; ++x) {
                const bool odd = (((y + oy) / cell) + ((x + ox) / cell)) % 2 == 1;
                g.at(c, y, x) = odd ? hi : lo;
            }
        }
    }
    return g;
}

}  // namespace

DatasetKind parse_dataset_kind(const std::string& name) {
    if (name == "blobs") return DatasetKind::blobs;
    if (name == "gradients") return DatasetKind::gradients;
    if (name == "checkers") return DatasetKind::checkers;
    throw UsageError("unknown dataset kind '" + name + "' (expected blobs, gradients or checkers)");
}

std::string to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::blobs:
            return "blobs";
        case DatasetKind::gradients:
            return "gradients";
        case DatasetKind::checkers:
            return "checkers";
    }
    return "unknown";
}

std::vector<Grid> synth_dataset(DatasetKind kind, std::size_t count, Dims dims, std::uint64_t seed) {
    if (count < 1) throw UsageError("synth_dataset: count must be >= 1");
    if (!dims.valid()) throw UsageError("synth_dataset: invalid dims");
    SeededRng rng(seed);
    std::vector<Grid> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        switch (kind) {
            case DatasetKind::blobs:
                out.push_back(make_blobs(rng, dims));
                break;
            case DatasetKind::gradients:
                out.push_back(make_gradient(rng, dims));
                break;
            case DatasetKind::checkers:
                out.push_back(make_checkers(rng, dims));
                break;
        }
    }
    return out;
}

}  // namespace gsd
