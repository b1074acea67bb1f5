// SPDX-License-Identifier: Apache-2.0
#include "gsd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gsd/error.hpp"

namespace gsd {

std::string to_string(const Dims& dims) {
    std::ostringstream os;
    os << dims.channels << 'x' << dims.height << 'x' << dims.width;
    return os.str();
}

Dims parse_dims(const std::string& text) {
    Dims d;
    char x1 = 0, x2 = 0;
    std::istringstream is(text);
    long long c = -1, h = -1, w = -1;
    if (!(is >> c >> x1 >> h >> x2 >> w) || x1 != 'x' || x2 != 'x' || !is.eof() || c <= 0 || h <= 0 ||
        w <= 0) {
        throw UsageError("dims must look like CxHxW with positive sizes, got '" + text + "'");
    }
    d.channels = static_cast<std::size_t>(c);
    d.height = static_cast<std::size_t>(h);
    d.width = static_cast<std::size_t>(w);
    return d;
}

Grid::Grid(Dims dims, double fill) : m_dims(dims) {
    if (!dims.valid()) {
        throw UsageError("grid dims must be positive, got " + to_string(dims));
    }
    m_data.assign(dims.count(), fill);
}

Grid::Grid(Dims dims, std::vector<double> data) : m_dims(dims), m_data(std::move(data)) {
    if (!dims.valid()) {
        throw UsageError("grid dims must be positive, got " + to_string(dims));
    }
    if (m_data.size() != dims.count()) {
        throw UsageError("grid data length " + std::to_string(m_data.size()) + " does not match dims " +
                         to_string(dims));
    }
}

std::span<double> Grid::channel(std::size_t c) {
    return std::span<double>(m_data).subspan(c * m_dims.plane(), m_dims.plane());
}

std::span<const double> Grid::channel(std::size_t c) const {
    return std::span<const double>(m_data).subspan(c * m_dims.plane(), m_dims.plane());
}

bool Grid::all_finite() const {
    return std::all_of(m_data.begin(), m_data.end(), [](double v) { return std::isfinite(v); });
}

Grid& Grid::operator+=(const Grid& other) {
    require_same_dims(*this, other, "grid +=");
    for (std::size_t i = 0; i < m_data.size(); ++i) m_data[i] += other.m_data[i];
    return *this;
}

Grid& Grid::operator-=(const Grid& other) {
    require_same_dims(*this, other, "grid -=");
    for (std::size_t i = 0; i < m_data.size(); ++i) m_data[i] -= other.m_data[i];
    return *this;
}

Grid& Grid::operator*=(double s) {
    for (double& v : m_data) v *= s;
    return *this;
}

Grid operator+(Grid a, const Grid& b) { return a += b; }
Grid operator-(Grid a, const Grid& b) { return a -= b; }
Grid operator*(double s, Grid a) { return a *= s; }

Grid axpby(double a, const Grid& x, double b, const Grid& y) {
    require_same_dims(x, y, "axpby");
    Grid out(x.dims());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

double max_abs_diff(const Grid& a, const Grid& b) {
    require_same_dims(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double mean_abs_diff(const Grid& a, const Grid& b) {
    require_same_dims(a, b, "mean_abs_diff");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

double sum_squares(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

void require_finite(const Grid& g, const char* where) {
    if (!g.all_finite()) {
        throw NumericalError(std::string("non-finite value in ") + where);
    }
}

void require_same_dims(const Grid& a, const Grid& b, const char* where) {
    if (a.dims() != b.dims()) {
        throw UsageError(std::string(where) + ": dims mismatch " + to_string(a.dims()) + " vs " +
                         to_string(b.dims()));
    }
}

}  // namespace gsd
