// SPDX-License-Identifier: Apache-2.0
#include "gsd/sampler.hpp"

#include <cmath>
#include <string>

#include "gsd/error.hpp"

namespace gsd {
namespace {

Grid transfer(const Grid& x, const Grid& eps, int from, int to, const NoiseSchedule& schedule) {
    require_same_dims(x, eps, "sampler");
    const double ab_from = schedule.alpha_bar(from);
    const double ab_to = schedule.alpha_bar(to);
    const double s_from = std::sqrt(1.0 - ab_from);
    const double scale = std::sqrt(ab_to) / std::sqrt(ab_from);
    const double s_to = std::sqrt(1.0 - ab_to);
    Grid out(x.dims());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = scale * (x[i] - s_from * eps[i]) + s_to * eps[i];
    }
    require_finite(out, "sampler step");
    return out;
}

std::vector<int> descending_nodes(const SamplingPlan& plan) {
    std::vector<int> nodes(plan.tau().rbegin(), plan.tau().rend());
    nodes.push_back(0);
    return nodes;
}

void check_plan(const SamplingPlan& plan, const NoiseSchedule& schedule) {
    if (plan.steps() != schedule.steps()) {
        throw UsageError("sampling plan built for T=" + std::to_string(plan.steps()) + " but schedule has T=" +
                         std::to_string(schedule.steps()));
    }
}

}  // namespace

Grid generate_step(const Grid& x_cur, int t_cur, int t_prev, const NoisePredictor& pred,
                   const NoiseSchedule& schedule) {
    if (t_prev >= t_cur) {
        throw UsageError("generate_step: t_prev (" + std::to_string(t_prev) + ") must be below t_cur (" +
                         std::to_string(t_cur) + ")");
    }
    return transfer(x_cur, pred.predict(x_cur, t_cur), t_cur, t_prev, schedule);
}

Grid invert_step(const Grid& x_cur, int t_cur, int t_next, const NoisePredictor& pred,
                 const NoiseSchedule& schedule) {
    if (t_next <= t_cur) {
        throw UsageError("invert_step: t_next (" + std::to_string(t_next) + ") must exceed t_cur (" +
                         std::to_string(t_cur) + ")");
    }
    return transfer(x_cur, pred.predict(x_cur, t_cur), t_cur, t_next, schedule);
}

Grid generate_step_stochastic(const Grid& x_cur, int t_cur, int t_prev, const NoisePredictor& pred,
                              const NoiseSchedule& schedule, double eta, SeededRng& rng) {
    if (t_prev >= t_cur) throw UsageError("generate_step_stochastic: t_prev must be below t_cur");
    const double sigma = schedule.sigma(t_prev, t_cur, eta);
    const double ab_cur = schedule.alpha_bar(t_cur);
    const double ab_prev = schedule.alpha_bar(t_prev);
    const double radicand = 1.0 - ab_prev - sigma * sigma;
    if (radicand < 0.0) {
        throw NumericalError("generate_step_stochastic: sigma^2 exceeds 1 - alpha_bar(t_prev)");
    }
    const Grid eps = pred.predict(x_cur, t_cur);
    require_same_dims(x_cur, eps, "generate_step_stochastic");
    const double s_cur = std::sqrt(1.0 - ab_cur);
    const double scale = std::sqrt(ab_prev) / std::sqrt(ab_cur);
    const double dir = std::sqrt(radicand);
    Grid out(x_cur.dims());
    for (std::size_t i = 0; i < x_cur.size(); ++i) {
        const double z = rng.normal();
        out[i] = scale * (x_cur[i] - s_cur * eps[i]) + dir * eps[i] + sigma * z;
    }
    require_finite(out, "stochastic sampler step");
    return out;
}

Grid generate(const Grid& x_start, const SamplingPlan& plan, const NoisePredictor& pred,
              const NoiseSchedule& schedule) {
    check_plan(plan, schedule);
    const auto nodes = descending_nodes(plan);
    Grid x = x_start;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        x = generate_step(x, nodes[i], nodes[i + 1], pred, schedule);
    }
    return x;
}

Trajectory generate_trajectory(const Grid& x_start, const SamplingPlan& plan, const NoisePredictor& pred,
                               const NoiseSchedule& schedule) {
    check_plan(plan, schedule);
    const auto nodes = descending_nodes(plan);
    Trajectory traj{Trajectory::Direction::generate, {}};
    traj.states.reserve(nodes.size());
    traj.states.push_back({nodes.front(), x_start});
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        traj.states.push_back({nodes[i + 1], generate_step(traj.states.back().x, nodes[i], nodes[i + 1], pred,
                                                           schedule)});
    }
    return traj;
}

Grid generate_stochastic(const Grid& x_start, const SamplingPlan& plan, const NoisePredictor& pred,
                         const NoiseSchedule& schedule, SeededRng& rng) {
    check_plan(plan, schedule);
    const auto nodes = descending_nodes(plan);
    Grid x = x_start;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        x = generate_step_stochastic(x, nodes[i], nodes[i + 1], pred, schedule, plan.eta(), rng);
    }
    return x;
}

Trajectory generate_trajectory_stochastic(const Grid& x_start, const SamplingPlan& plan, const NoisePredictor& pred,
                                          const NoiseSchedule& schedule, SeededRng& rng) {
    check_plan(plan, schedule);
    const auto nodes = descending_nodes(plan);
    Trajectory traj{Trajectory::Direction::generate, {}};
    traj.states.reserve(nodes.size());
    traj.states.push_back({nodes.front(), x_start});
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        traj.states.push_back({nodes[i + 1], generate_step_stochastic(traj.states.back().x, nodes[i], nodes[i + 1],
                                                                      pred, schedule, plan.eta(), rng)});
    }
    return traj;
}

Grid invert(const Grid& x0, const SamplingPlan& plan, const NoisePredictor& pred, const NoiseSchedule& schedule) {
    check_plan(plan, schedule);
    Grid x = x0;
    int t = 0;
    for (int next : plan.tau()) {
        x = invert_step(x, t, next, pred, schedule);
        t = next;
    }
    return x;
}

Trajectory invert_trajectory(const Grid& x0, const SamplingPlan& plan, const NoisePredictor& pred,
                             const NoiseSchedule& schedule) {
    check_plan(plan, schedule);
    Trajectory traj{Trajectory::Direction::invert, {}};
    traj.states.reserve(plan.tau().size() + 1);
    traj.states.push_back({0, x0});
    for (int next : plan.tau()) {
        const TrajectoryState& last = traj.states.back();
        traj.states.push_back({next, invert_step(last.x, last.t, next, pred, schedule)});
    }
    return traj;
}

}  // namespace gsd
