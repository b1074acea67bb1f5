// SPDX-License-Identifier: Apache-2.0
#include "gsd/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "gsd/error.hpp"

namespace gsd {

NoiseSchedule::NoiseSchedule(std::vector<double> alphas) {
    if (alphas.empty()) throw UsageError("schedule needs at least one step");
    m_alpha.reserve(alphas.size() + 1);
    m_alpha_bar.reserve(alphas.size() + 1);
    m_alpha.push_back(1.0);
    m_alpha_bar.push_back(1.0);
    double running = 1.0;
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) {
            throw UsageError("schedule alpha values must lie in (0, 1)");
        }
        running *= a;
        m_alpha.push_back(a);
        m_alpha_bar.push_back(running);
    }
}

NoiseSchedule NoiseSchedule::linear(int steps) {
    if (steps < 1) throw UsageError("schedule step count T must be >= 1");
    std::vector<double> alphas(static_cast<std::size_t>(steps));
    for (int t = 1; t <= steps; ++t) {
        alphas[static_cast<std::size_t>(t - 1)] = 1.0 - 0.02 * t / steps;
    }
    return NoiseSchedule(std::move(alphas));
}

void NoiseSchedule::check_step(int t, int lo, const char* what) const {
    if (t < lo || t > steps()) {
        throw UsageError(std::string(what) + ": step " + std::to_string(t) + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(steps()) + "]");
    }
}

double NoiseSchedule::alpha(int t) const {
    check_step(t, 1, "alpha");
    return m_alpha[static_cast<std::size_t>(t)];
}

double NoiseSchedule::alpha_bar(int t) const {
    check_step(t, 0, "alpha_bar");
    return m_alpha_bar[static_cast<std::size_t>(t)];
}

double NoiseSchedule::sigma(int t_prev, int t_cur, double eta) const {
    check_step(t_prev, 0, "sigma");
    check_step(t_cur, 1, "sigma");
    if (t_prev >= t_cur) throw UsageError("sigma: t_prev must be smaller than t_cur");
    if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("sigma: eta must lie in [0, 1]");
    if (eta == 0.0) return 0.0;
    const double ab_prev = alpha_bar(t_prev);
    const double ab_cur = alpha_bar(t_cur);
    return eta * std::sqrt((1.0 - ab_prev) / (1.0 - ab_cur)) * std::sqrt(1.0 - ab_cur / ab_prev);
}

std::string NoiseSchedule::to_csv() const {
    std::string out = "t,alpha,alpha_bar\n";
    char buf[96];
    for (int t = 1; t <= steps(); ++t) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", t, m_alpha[static_cast<std::size_t>(t)],
                      m_alpha_bar[static_cast<std::size_t>(t)]);
        out += buf;
    }
    return out;
}

SamplingPlan::SamplingPlan(std::vector<int> tau, int steps, double eta)
    : m_tau(std::move(tau)), m_steps(steps), m_eta(eta) {
    if (m_tau.empty()) throw UsageError("sampling plan must contain at least one step");
    if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("sampling plan eta must lie in [0, 1]");
    for (std::size_t i = 0; i < m_tau.size(); ++i) {
        if (m_tau[i] < 1 || m_tau[i] > steps) {
            throw UsageError("sampling plan index " + std::to_string(m_tau[i]) + " outside [1, " +
                             std::to_string(steps) + "]");
        }
        if (i > 0 && m_tau[i] <= m_tau[i - 1]) {
            throw UsageError("sampling plan indices must be strictly increasing");
        }
    }
}

SamplingPlan SamplingPlan::uniform(int steps, int sample_steps, double eta) {
    if (steps < 1) throw UsageError("T must be >= 1");
    if (sample_steps < 1 || sample_steps > steps) {
        throw UsageError("S must lie in [1, T], got S=" + std::to_string(sample_steps));
    }
    if (steps % sample_steps != 0) {
        throw UsageError("S=" + std::to_string(sample_steps) + " does not divide T=" + std::to_string(steps));
    }
    const int stride = steps / sample_steps;
    std::vector<int> tau;
    tau.reserve(static_cast<std::size_t>(sample_steps));
    for (int i = 1; i <= sample_steps; ++i) tau.push_back(i * stride);
    return SamplingPlan(std::move(tau), steps, eta);
}

}  // namespace gsd
