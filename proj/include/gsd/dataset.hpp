// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsd/grid.hpp"

namespace gsd {

enum class DatasetKind { blobs, gradients, checkers };

/// Throws UsageError for unknown names.
DatasetKind parse_dataset_kind(const std::string& name);
std::string to_string(DatasetKind kind);

/// Deterministic synthetic images in [-1, 1]:
///   blobs     - a dark background with 1-4 Gaussian blobs of random width and sign
///   gradients - a linear ramp in a random direction
///   checkers  - a two-tone checkerboard with random cell size and phase
std::vector<Grid> synth_dataset(DatasetKind kind, std::size_t count, Dims dims, std::uint64_t seed);

}  // namespace gsd
