// SPDX-License-Identifier: Apache-2.0
#include "gsd/tiny_denoiser.hpp"

#include <bit>
#include <cmath>
#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gsd/error.hpp"
#include "gsd/rng.hpp"
#include "byte_order.hpp"

namespace gsd {
namespace {

using detail::get_le;
using detail::put_f64;
using detail::put_u16;
using detail::put_u32;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using MatrixMap = Eigen::Map<RowMatrix>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

constexpr char kMagic[4] = {'G', 'S', 'D', 'W'};
constexpr std::size_t kHeaderSize = 4 + 2 + 3 * 4 + 4 + 4;

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& z) { return 1.0 / (1.0 + (-z).exp()); }

struct Layout {
    std::size_t in, hidden, out;
    std::size_t w1() const { return 0; }
    std::size_t b1() const { return w1() + hidden * in; }
    std::size_t w2() const { return b1() + hidden; }
    std::size_t b2() const { return w2() + hidden * hidden; }
    std::size_t w3() const { return b2() + hidden; }
    std::size_t b3() const { return w3() + out * hidden; }
    std::size_t total() const { return b3() + out; }
};

}  // namespace

struct TinyDenoiser::Views {
    ConstMatrixMap w1;
    ConstVectorMap b1;
    ConstMatrixMap w2;
    ConstVectorMap b2;
    ConstMatrixMap w3;
    ConstVectorMap b3;
};

TinyDenoiser::TinyDenoiser(Dims dims, int steps, std::uint64_t seed, std::uint32_t time_embed_dim,
                           std::uint32_t hidden_dim)
    : m_dims(dims),
      m_steps(steps),
      m_schedule(NoiseSchedule::linear(std::max(steps, 1))),
      m_embed_dim(time_embed_dim), m_hidden(hidden_dim) {
    if (!dims.valid()) throw UsageError("denoiser dims must be positive");
    if (steps < 1) throw UsageError("denoiser needs T >= 1");
    if (time_embed_dim < 2 || time_embed_dim % 2 != 0) {
        throw UsageError("time embedding dimension must be even and >= 2");
    }
    if (hidden_dim < 1) throw UsageError("hidden dimension must be >= 1");

    const Layout l{input_dim(), m_hidden, m_dims.count()};
    m_params.assign(l.total(), 0.0);
    SeededRng rng(seed);
    auto fill = [&](std::size_t offset, std::size_t count, double scale) {
        for (std::size_t i = 0; i < count; ++i) m_params[offset + i] = scale * rng.normal();
    };
    fill(l.w1(), l.hidden * l.in, std::sqrt(1.0 / static_cast<double>(l.in)));
    fill(l.w2(), l.hidden * l.hidden, std::sqrt(1.0 / static_cast<double>(l.hidden)));
    fill(l.w3(), l.out * l.hidden, std::sqrt(1.0 / static_cast<double>(l.hidden)));
}

TinyDenoiser::Views TinyDenoiser::views() const {
    const Layout l{input_dim(), m_hidden, m_dims.count()};
    const auto h = static_cast<Eigen::Index>(l.hidden);
    const double* p = m_params.data();
    return Views{ConstMatrixMap(p + l.w1(), h, static_cast<Eigen::Index>(l.in)),
                 ConstVectorMap(p + l.b1(), h),
                 ConstMatrixMap(p + l.w2(), h, h),
                 ConstVectorMap(p + l.b2(), h),
                 ConstMatrixMap(p + l.w3(), static_cast<Eigen::Index>(l.out), h),
                 ConstVectorMap(p + l.b3(), static_cast<Eigen::Index>(l.out))};
}

Eigen::VectorXd TinyDenoiser::time_embedding(int t) const {
    const std::uint32_t half = m_embed_dim / 2;
    Eigen::VectorXd e(m_embed_dim);
    for (std::uint32_t k = 0; k < half; ++k) {
        const double frac = half > 1 ? static_cast<double>(k) / static_cast<double>(half - 1) : 0.0;
        const double omega = std::pow(static_cast<double>(m_steps), -frac);
        e(2 * k) = std::sin(omega * t);
        e(2 * k + 1) = std::cos(omega * t);
    }
    return e;
}

Eigen::MatrixXd TinyDenoiser::build_inputs(const Eigen::MatrixXd& noisy, std::span<const int> t) const {
    const auto n = static_cast<Eigen::Index>(m_dims.count());
    if (noisy.rows() != n || static_cast<std::size_t>(noisy.cols()) != t.size()) {
        throw UsageError("denoiser batch shape does not match model dims");
    }
    Eigen::MatrixXd inputs(static_cast<Eigen::Index>(input_dim()), noisy.cols());
    inputs.topRows(n) = noisy;
    for (Eigen::Index j = 0; j < noisy.cols(); ++j) {
        inputs.col(j).tail(m_embed_dim) = time_embedding(t[static_cast<std::size_t>(j)]);
    }
    return inputs;
}

Grid TinyDenoiser::predict(const Grid& x, int t) const {
    if (x.dims() != m_dims) {
        throw UsageError("denoiser expects dims " + to_string(m_dims) + ", got " + to_string(x.dims()));
    }
    const auto v = views();
    const auto n = static_cast<Eigen::Index>(m_dims.count());
    Eigen::VectorXd input(static_cast<Eigen::Index>(input_dim()));
    input.head(n) = Eigen::Map<const Eigen::VectorXd>(x.values().data(), n);
    input.tail(m_embed_dim) = time_embedding(t);

    Eigen::ArrayXd z1 = (v.w1 * input + v.b1).array();
    Eigen::VectorXd h1 = (z1 / (1.0 + (-z1).exp())).matrix();
    Eigen::ArrayXd z2 = (v.w2 * h1 + v.b2).array();
    Eigen::VectorXd h2 = (z2 / (1.0 + (-z2).exp())).matrix();
    const double ab = m_schedule.alpha_bar(t);
    Eigen::VectorXd y = std::sqrt(1.0 - ab) * input.head(n) + std::sqrt(ab) * (v.w3 * h2 + v.b3);

    Grid out(m_dims);
    Eigen::Map<Eigen::VectorXd>(out.values().data(), n) = y;
    return out;
}

double TinyDenoiser::batch_loss(const Eigen::MatrixXd& noisy, std::span<const int> t,
                                const Eigen::MatrixXd& targets, std::vector<double>* gradient) const {
    if (targets.rows() != noisy.rows() || targets.cols() != noisy.cols()) {
        throw UsageError("denoiser targets shape does not match inputs");
    }
    const auto v = views();
    const Eigen::MatrixXd a0 = build_inputs(noisy, t);

    const Eigen::ArrayXXd z1 = ((v.w1 * a0).colwise() + v.b1).array();
    const Eigen::ArrayXXd s1 = sigmoid(z1);
    const Eigen::MatrixXd h1 = (z1 * s1).matrix();
    const Eigen::ArrayXXd z2 = ((v.w2 * h1).colwise() + v.b2).array();
    const Eigen::ArrayXXd s2 = sigmoid(z2);
    const Eigen::MatrixXd h2 = (z2 * s2).matrix();
    Eigen::MatrixXd y = (v.w3 * h2).colwise() + v.b3;
    Eigen::VectorXd mix(noisy.cols());
    for (Eigen::Index j = 0; j < noisy.cols(); ++j) {
        const double ab = m_schedule.alpha_bar(t[static_cast<std::size_t>(j)]);
        mix(j) = std::sqrt(ab);
        y.col(j) = std::sqrt(1.0 - ab) * noisy.col(j) + mix(j) * y.col(j);
    }

    const Eigen::MatrixXd residual = y - targets;
    const double count = static_cast<double>(residual.size());
    const double loss = residual.squaredNorm() / count;
    if (!gradient) return loss;

    const Layout l{input_dim(), m_hidden, m_dims.count()};
    gradient->assign(l.total(), 0.0);
    double* g = gradient->data();
    const auto h = static_cast<Eigen::Index>(l.hidden);
    MatrixMap gw1(g + l.w1(), h, static_cast<Eigen::Index>(l.in));
    VectorMap gb1(g + l.b1(), h);
    MatrixMap gw2(g + l.w2(), h, h);
    VectorMap gb2(g + l.b2(), h);
    MatrixMap gw3(g + l.w3(), static_cast<Eigen::Index>(l.out), h);
    VectorMap gb3(g + l.b3(), static_cast<Eigen::Index>(l.out));

    // d silu(z)/dz = s (1 + z (1 - s))
    // d loss / d net, through the fixed sqrt(alpha_bar) output mix
    const Eigen::MatrixXd dy = (2.0 / count) * (residual * mix.asDiagonal());
    gw3.noalias() = dy * h2.transpose();
    gb3 = dy.rowwise().sum();
    const Eigen::MatrixXd dz2 = ((v.w3.transpose() * dy).array() * s2 * (1.0 + z2 * (1.0 - s2))).matrix();
    gw2.noalias() = dz2 * h1.transpose();
    gb2 = dz2.rowwise().sum();
    const Eigen::MatrixXd dz1 = ((v.w2.transpose() * dz2).array() * s1 * (1.0 + z1 * (1.0 - s1))).matrix();
    gw1.noalias() = dz1 * a0.transpose();
    gb1 = dz1.rowwise().sum();
    return loss;
}

std::vector<std::uint8_t> TinyDenoiser::serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + 8 * m_params.size());
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    put_u16(out, kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(m_dims.channels));
    put_u32(out, static_cast<std::uint32_t>(m_dims.height));
    put_u32(out, static_cast<std::uint32_t>(m_dims.width));
    put_u32(out, m_embed_dim);
    put_u32(out, m_hidden);
    for (double p : m_params) put_f64(out, p);
    return out;
}

TinyDenoiser TinyDenoiser::deserialize(std::span<const std::uint8_t> bytes, int steps) {
    if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw DataError("not a GSDW checkpoint");
    }
    const auto version = static_cast<std::uint16_t>(get_le(bytes, 4, 2));
    if (version != kFormatVersion) {
        throw DataError("unsupported checkpoint version " + std::to_string(version));
    }
    Dims dims{get_le(bytes, 6, 4), get_le(bytes, 10, 4), get_le(bytes, 14, 4)};
    const auto embed = static_cast<std::uint32_t>(get_le(bytes, 18, 4));
    const auto hidden = static_cast<std::uint32_t>(get_le(bytes, 22, 4));
    if (!dims.valid() || embed < 2 || embed % 2 != 0 || hidden < 1) {
        throw DataError("checkpoint header is invalid");
    }
    TinyDenoiser model(dims, steps, 0, embed, hidden);
    const std::size_t expected = kHeaderSize + 8 * model.m_params.size();
    if (bytes.size() != expected) {
        throw DataError("checkpoint size " + std::to_string(bytes.size()) + " does not match header (expected " +
                        std::to_string(expected) + ")");
    }
    for (std::size_t i = 0; i < model.m_params.size(); ++i) {
        model.m_params[i] = std::bit_cast<double>(get_le(bytes, kHeaderSize + 8 * i, 8));
    }
    return model;
}

void TinyDenoiser::save(const std::filesystem::path& path) const {
    const auto bytes = serialize();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open checkpoint for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing checkpoint: " + path.string());
}

TinyDenoiser TinyDenoiser::load(const std::filesystem::path& path, int steps) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes, steps);
}

}  // namespace gsd
