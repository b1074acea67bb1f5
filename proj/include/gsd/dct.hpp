// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gsd/grid.hpp"

namespace gsd {

/// Full-frame orthonormal 2D DCT-II, applied to each channel independently
/// (row pass, then column pass). Energy preserving: sum of squares per
/// channel is unchanged up to rounding.
Grid dct2(const Grid& x);

/// Inverse of dct2 (orthonormal DCT-III per channel).
Grid idct2(const Grid& coeffs);

}  // namespace gsd
