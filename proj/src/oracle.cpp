// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Dense>

#include "gsd/error.hpp"
#include "gsd/predictor.hpp"

namespace gsd {

AnalyticOracle AnalyticOracle::zero() { return AnalyticOracle(Mode::zero); }

AnalyticOracle AnalyticOracle::constant(Grid value) {
    AnalyticOracle o(Mode::constant);
    o.m_value = std::move(value);
    return o;
}

AnalyticOracle AnalyticOracle::constant(double value) {
    AnalyticOracle o(Mode::constant);
    o.m_fill = value;
    return o;
}

AnalyticOracle AnalyticOracle::linear(std::vector<double> matrix, Grid bias) {
    const std::size_t n = bias.size();
    if (matrix.size() != n * n) {
        throw UsageError("linear oracle: matrix must be n x n with n = bias size");
    }
    AnalyticOracle o(Mode::linear);
    o.m_matrix = std::move(matrix);
    o.m_value = std::move(bias);
    return o;
}

std::optional<Dims> AnalyticOracle::bound_dims() const {
    if (m_value) return m_value->dims();
    return std::nullopt;
}

Grid AnalyticOracle::predict(const Grid& x, int /*t*/) const {
    switch (m_mode) {
        case Mode::zero:
            return Grid(x.dims(), 0.0);
        case Mode::constant:
            if (!m_value) return Grid(x.dims(), m_fill);
            require_same_dims(x, *m_value, "constant oracle");
            return *m_value;
        case Mode::linear: {
            require_same_dims(x, *m_value, "linear oracle");
            const std::size_t n = x.size();
            Grid out = *m_value;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += m_matrix[i * n + j] * x[j];
                out[i] += acc;
            }
            return out;
        }
    }
    throw UsageError("unknown oracle mode");
}

double AnalyticOracle::lipschitz() const {
    if (m_mode != Mode::linear) return 0.0;
    const auto n = static_cast<Eigen::Index>(m_value->size());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        m_matrix.data(), n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues()(0);
}

}  // namespace gsd
