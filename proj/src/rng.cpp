// SPDX-License-Identifier: Apache-2.0
#include "gsd/rng.hpp"

#include <cmath>
#include <numbers>

#include "gsd/error.hpp"

namespace gsd {

double SeededRng::uniform() {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(m_engine() >> 11) + 0.5) * kScale;
}

double SeededRng::normal() {
    if (m_spare) {
        double v = *m_spare;
        m_spare.reset();
        return v;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    m_spare = r * std::sin(theta);
    return r * std::cos(theta);
}

std::uint64_t SeededRng::index(std::uint64_t n) {
    if (n == 0) throw UsageError("SeededRng::index: empty range");
    // Reject the top partial bucket so every residue is equally likely.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
    std::uint64_t v;
    do {
        v = m_engine();
    } while (v > limit);
    return v % n;
}

Grid sample_gaussian(SeededRng& rng, Dims dims) {
    if (!dims.valid()) {
        throw UsageError("sample_gaussian: dims must be positive, got " + to_string(dims));
    }
    Grid g(dims);
    for (double& v : g.values()) v = rng.normal();
    return g;
}

}  // namespace gsd
