// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gsd/grid.hpp"
#include "gsd/predictor.hpp"
#include "gsd/schedule.hpp"
#include "gsd/tiny_denoiser.hpp"

namespace gsd {

/// sqrt(alpha_bar_t) x0 + sqrt(1 - alpha_bar_t) eps.
Grid forward_diffuse(const Grid& x0, int t, const Grid& eps, const NoiseSchedule& schedule);

/// Mean over elements of (eps - pred(forward_diffuse(x0, t, eps), t))^2.
double loss_simple(const NoisePredictor& pred, const Grid& x0, int t, const Grid& eps,
                   const NoiseSchedule& schedule);

struct TrainConfig {
    int steps = 20000;
    int batch = 32;
    double learning_rate = 1e-3;
    double input_noise_std = 0.01;
    std::uint64_t seed = 1;
    /// Loss is averaged over windows of this many steps; 0 picks steps / 50.
    int log_every = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
};

struct LossPoint {
    int step;     // last step of the averaging window (1-based)
    double loss;  // mean batch loss over the window
};

struct TrainReport {
    std::vector<LossPoint> curve;
    double initial_loss = 0.0;  // batch loss of the first step
    double final_loss = 0.0;    // mean loss of the last window
};

using TrainProgress = std::function<void(const LossPoint&)>;

/// Adam on loss_simple. Each step draws, per batch element: an image index,
/// input noise n ~ N(0, input_noise_std^2) added to it, t ~ U{1..T} and
/// eps ~ N(0, 1). Throws NumericalError if the loss stops being finite.
TrainReport train(TinyDenoiser& model, std::span<const Grid> dataset, const TrainConfig& cfg,
                  const NoiseSchedule& schedule, const TrainProgress& progress = {});

struct GradientCheckResult {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
};

/// Compares analytic gradients of loss_simple at (x0, t) against central
/// finite differences with step 1e-5 on `samples` randomly chosen
/// parameters. Relative error is |a - n| / max(|a|, |n|, 1e-6).
GradientCheckResult gradient_check(const TinyDenoiser& model, const Grid& x0, int t, const NoiseSchedule& schedule,
                                   std::uint64_t seed, std::size_t samples = 128);

}  // namespace gsd
