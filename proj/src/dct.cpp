// SPDX-License-Identifier: Apache-2.0
#include "gsd/dct.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <Eigen/Dense>

#include "gsd/error.hpp"

namespace gsd {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// basis(k, i) = s_k * cos(pi * (2i + 1) * k / (2n))
std::shared_ptr<const RowMatrix> dct_basis(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const RowMatrix>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        const auto size = static_cast<Eigen::Index>(n);
        auto basis = std::make_shared<RowMatrix>(size, size);
        const double s0 = std::sqrt(1.0 / static_cast<double>(n));
        const double sk = std::sqrt(2.0 / static_cast<double>(n));
        for (Eigen::Index k = 0; k < size; ++k) {
            for (Eigen::Index i = 0; i < size; ++i) {
                const double angle = std::numbers::pi * static_cast<double>((2 * i + 1) * k) /
                                     static_cast<double>(2 * n);
                (*basis)(k, i) = (k == 0 ? s0 : sk) * std::cos(angle);
            }
        }
        slot = std::move(basis);
    }
    return slot;
}

Grid transform(const Grid& x, bool inverse) {
    if (!x.dims().valid()) throw UsageError("dct: invalid grid");
    const auto [channels, h, w] = x.dims();
    const auto rows = static_cast<Eigen::Index>(h);
    const auto cols = static_cast<Eigen::Index>(w);
    const auto col_basis = dct_basis(h);
    const auto row_basis = dct_basis(w);
    Grid out(x.dims());
    for (std::size_t c = 0; c < channels; ++c) {
        const Eigen::Map<const RowMatrix> src(x.channel(c).data(), rows, cols);
        Eigen::Map<RowMatrix> dst(out.channel(c).data(), rows, cols);
        if (inverse) {
            dst.noalias() = col_basis->transpose() * src * *row_basis;
        } else {
            dst.noalias() = *col_basis * src * row_basis->transpose();
        }
    }
    return out;
}

}  // namespace

Grid dct2(const Grid& x) { return transform(x, false); }

Grid idct2(const Grid& coeffs) { return transform(coeffs, true); }

}  // namespace gsd
