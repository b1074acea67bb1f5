// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "gsd/grid.hpp"

namespace gsd {

/// Reproducible random source.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Every transform on top of it is written out here rather than
/// taken from <random> distributions, whose algorithms are left to the
/// library vendor:
///   - uniform(): top 53 bits mapped to the open interval (0, 1);
///   - normal(): Box-Muller on two uniforms, the second deviate cached;
///   - index(n): rejection sampling on the raw 64-bit output.
/// Identical seeds give identical streams on any platform with IEEE doubles
/// and a correctly rounded libm log/sin/cos.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : m_engine(seed), m_seed(seed) {}

    SeededRng(const SeededRng&) = delete;
    SeededRng& operator=(const SeededRng&) = delete;
    SeededRng(SeededRng&&) = default;
    SeededRng& operator=(SeededRng&&) = default;

    std::uint64_t seed() const { return m_seed; }

    std::uint64_t next_u64() { return m_engine(); }
    double uniform();
    double normal();
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n);

private:
    std::mt19937_64 m_engine;
    std::uint64_t m_seed;
    std::optional<double> m_spare;
};

/// Grid of i.i.d. standard normal draws. Throws UsageError on zero-sized dims.
Grid sample_gaussian(SeededRng& rng, Dims dims);

}  // namespace gsd
