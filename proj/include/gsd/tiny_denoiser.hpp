// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gsd/predictor.hpp"
#include "gsd/schedule.hpp"

namespace gsd {

/// Compact dense noise predictor.
///
///   input  = [flattened x_t ; sinusoidal embedding of t]
///   hidden = SiLU(W1 input + b1), SiLU(W2 h1 + b2)
///   net    = W3 h2 + b3
///   eps(x_t, t) = sqrt(1 - alpha_bar_t) x_t + sqrt(alpha_bar_t) net
///
/// The fixed skip term makes eps track x_t at high noise, where the sampler
/// amplifies prediction errors by up to 1/sqrt(alpha_bar_T); the network
/// itself then learns the well-scaled residual (the "v" target). alpha_bar
/// comes from the linear schedule of length T, with alpha_bar_0 = 1.
///
/// The embedding has time_embed_dim/2 angular frequencies spaced
/// geometrically from 1 down to 1/T, each contributing (sin, cos).
///
/// Parameters live in one contiguous array in checkpoint order:
/// W1 (hidden x in, row-major), b1, W2 (hidden x hidden), b2,
/// W3 (out x hidden), b3.
class TinyDenoiser final : public NoisePredictor {
public:
    static constexpr std::uint32_t kDefaultTimeEmbedDim = 16;
    static constexpr std::uint32_t kDefaultHiddenDim = 256;
    static constexpr std::uint16_t kFormatVersion = 1;

    /// Randomly initialized model. `steps` is the schedule length T the
    /// time embedding is scaled to.
    TinyDenoiser(Dims dims, int steps, std::uint64_t seed,
                 std::uint32_t time_embed_dim = kDefaultTimeEmbedDim,
                 std::uint32_t hidden_dim = kDefaultHiddenDim);

    Grid predict(const Grid& x, int t) const override;
    std::optional<Dims> bound_dims() const override { return m_dims; }

    const Dims& dims() const { return m_dims; }
    int steps() const { return m_steps; }
    std::uint32_t time_embed_dim() const { return m_embed_dim; }
    std::uint32_t hidden_dim() const { return m_hidden; }
    std::size_t input_dim() const { return m_dims.count() + m_embed_dim; }

    std::span<double> parameters() { return m_params; }
    std::span<const double> parameters() const { return m_params; }

    Eigen::VectorXd time_embedding(int t) const;

    /// Mean squared error between predict(x_t[:, j], t[j]) and targets[:, j]
    /// over all elements of the batch. Columns of `noisy` and `targets` are
    /// flattened grids. When `gradient` is non-null it receives d loss / d
    /// parameters (resized to parameters().size()).
    double batch_loss(const Eigen::MatrixXd& noisy, std::span<const int> t, const Eigen::MatrixXd& targets,
                      std::vector<double>* gradient) const;

    std::vector<std::uint8_t> serialize() const;
    static TinyDenoiser deserialize(std::span<const std::uint8_t> bytes, int steps);

    void save(const std::filesystem::path& path) const;
    static TinyDenoiser load(const std::filesystem::path& path, int steps);

private:
    struct Views;
    Views views() const;
    Eigen::MatrixXd build_inputs(const Eigen::MatrixXd& noisy, std::span<const int> t) const;

    Dims m_dims;
    int m_steps;
    NoiseSchedule m_schedule;
    std::uint32_t m_embed_dim;
    std::uint32_t m_hidden;
    std::vector<double> m_params;
};

}  // namespace gsd
