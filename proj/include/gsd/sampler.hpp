// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "gsd/grid.hpp"
#include "gsd/predictor.hpp"
#include "gsd/rng.hpp"
#include "gsd/schedule.hpp"

namespace gsd {

struct TrajectoryState {
    int t;
    Grid x;
};

struct Trajectory {
    enum class Direction { generate, invert };
    Direction direction;
    /// Strictly decreasing t for generate (t_S ... 0), increasing for invert.
    std::vector<TrajectoryState> states;
};

/// Deterministic denoising hop t_cur -> t_prev (t_prev < t_cur, t_prev may be 0):
///   x_prev = sqrt(ab_prev) (x - sqrt(1 - ab_cur) e) / sqrt(ab_cur) + sqrt(1 - ab_prev) e,
/// with e = pred(x_cur, t_cur).
Grid generate_step(const Grid& x_cur, int t_cur, int t_prev, const NoisePredictor& pred,
                   const NoiseSchedule& schedule);

/// Deterministic diffusion hop t_cur -> t_next (t_next > t_cur, t_cur may be 0),
/// same form as generate_step with the noise estimate taken at (x_cur, t_cur).
Grid invert_step(const Grid& x_cur, int t_cur, int t_next, const NoisePredictor& pred,
                 const NoiseSchedule& schedule);

/// Generalized hop with variance sigma(t_prev, t_cur, eta):
///   predicted-x0 term + sqrt(1 - ab_prev - sigma^2) e + sigma z,  z ~ N(0, 1).
/// Reduces to generate_step when eta == 0.
Grid generate_step_stochastic(const Grid& x_cur, int t_cur, int t_prev, const NoisePredictor& pred,
                              const NoiseSchedule& schedule, double eta, SeededRng& rng);

/// x_{t_S} -> ... -> x_{t_1} -> x_0 with the deterministic hop.
Grid generate(const Grid& x_start, const SamplingPlan& plan, const NoisePredictor& pred,
              const NoiseSchedule& schedule);
Trajectory generate_trajectory(const Grid& x_start, const SamplingPlan& plan, const NoisePredictor& pred,
                               const NoiseSchedule& schedule);

/// Generation using the plan's eta for every hop.
Grid generate_stochastic(const Grid& x_start, const SamplingPlan& plan, const NoisePredictor& pred,
                         const NoiseSchedule& schedule, SeededRng& rng);
Trajectory generate_trajectory_stochastic(const Grid& x_start, const SamplingPlan& plan, const NoisePredictor& pred,
                                          const NoiseSchedule& schedule, SeededRng& rng);

/// x_0 -> x_{t_1} -> ... -> x_{t_S}.
Grid invert(const Grid& x0, const SamplingPlan& plan, const NoisePredictor& pred, const NoiseSchedule& schedule);
Trajectory invert_trajectory(const Grid& x0, const SamplingPlan& plan, const NoisePredictor& pred,
                             const NoiseSchedule& schedule);

}  // namespace gsd
