// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "gsd/grid.hpp"

namespace gsd {

/// Noise predictor eps(x_t, t). Implementations must be pure: identical
/// inputs give bit-identical outputs with the same dims as x.
class NoisePredictor {
public:
    virtual ~NoisePredictor() = default;
    virtual Grid predict(const Grid& x, int t) const = 0;
    /// Dims the predictor is bound to, if any.
    virtual std::optional<Dims> bound_dims() const { return std::nullopt; }
};

/// Closed-form predictors used as exact test instruments.
///   zero:      eps(x, t) = 0
///   constant:  eps(x, t) = c
///   linear:    eps(x, t) = A x + b
class AnalyticOracle final : public NoisePredictor {
public:
    enum class Mode { zero, constant, linear };

    static AnalyticOracle zero();
    static AnalyticOracle constant(Grid value);
    /// Constant oracle filled with one value; adapts to whatever dims it is fed.
    static AnalyticOracle constant(double value);
    /// `matrix` is row-major n x n with n = bias.size().
    static AnalyticOracle linear(std::vector<double> matrix, Grid bias);

    Mode mode() const { return m_mode; }
    Grid predict(const Grid& x, int t) const override;
    std::optional<Dims> bound_dims() const override;

    /// Lipschitz constant in x under the Euclidean norm: 0 for zero and
    /// constant modes, the spectral norm of A for linear mode.
    double lipschitz() const;

private:
    AnalyticOracle(Mode mode) : m_mode(mode) {}

    Mode m_mode;
    std::optional<Grid> m_value;
    double m_fill = 0.0;
    std::vector<double> m_matrix;
};

}  // namespace gsd
