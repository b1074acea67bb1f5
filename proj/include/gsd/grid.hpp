// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gsd {

struct Dims {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t count() const { return channels * height * width; }
    std::size_t plane() const { return height * width; }
    bool valid() const { return channels > 0 && height > 0 && width > 0; }

    friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& dims);

/// Parses "CxHxW" (e.g. "1x16x16"). Throws UsageError on malformed input.
Dims parse_dims(const std::string& text);

/// Channel-major, row-major-within-channel array of doubles.
class Grid {
public:
    Grid() = default;
    explicit Grid(Dims dims, double fill = 0.0);
    Grid(Dims dims, std::vector<double> data);

    const Dims& dims() const { return m_dims; }
    std::size_t size() const { return m_data.size(); }

    double& operator[](std::size_t i) { return m_data[i]; }
    double operator[](std::size_t i) const { return m_data[i]; }
    double& at(std::size_t c, std::size_t y, std::size_t x) {
        return m_data[(c * m_dims.height + y) * m_dims.width + x];
    }
    double at(std::size_t c, std::size_t y, std::size_t x) const {
        return m_data[(c * m_dims.height + y) * m_dims.width + x];
    }

    std::span<double> values() { return m_data; }
    std::span<const double> values() const { return m_data; }
    std::span<double> channel(std::size_t c);
    std::span<const double> channel(std::size_t c) const;

    bool all_finite() const;

    Grid& operator+=(const Grid& other);
    Grid& operator-=(const Grid& other);
    Grid& operator*=(double s);

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Dims m_dims{};
    std::vector<double> m_data;
};

Grid operator+(Grid a, const Grid& b);
Grid operator-(Grid a, const Grid& b);
Grid operator*(double s, Grid a);

/// a*x + b*y, elementwise.
Grid axpby(double a, const Grid& x, double b, const Grid& y);

double max_abs_diff(const Grid& a, const Grid& b);
double mean_abs_diff(const Grid& a, const Grid& b);
double sum_squares(std::span<const double> v);

/// Throws NumericalError naming `where` if any element is NaN or infinite.
void require_finite(const Grid& g, const char* where);

/// Throws UsageError unless the two grids have equal dims.
void require_same_dims(const Grid& a, const Grid& b, const char* where);

}  // namespace gsd
