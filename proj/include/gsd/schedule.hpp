// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace gsd {

/// Diffusion hyperparameter tables for steps t = 1..T.
///
/// alpha_bar(t) is the running product of alpha(1..t). Step 0 denotes the
/// clean image: alpha_bar(0) == 1 so the terminal hop of a trajectory uses
/// the same transition formulas as every other hop.
class NoiseSchedule {
public:
    /// Takes alpha(1..T); every entry must lie in (0, 1).
    explicit NoiseSchedule(std::vector<double> alphas);

    /// alpha_t = 1 - 0.02 t / T.
    static NoiseSchedule linear(int steps);

    int steps() const { return static_cast<int>(m_alpha.size()) - 1; }
    double alpha(int t) const;
    /// Valid for t in [0, T].
    double alpha_bar(int t) const;

    /// Variance scale of the generalized sampler for the hop t_cur -> t_prev.
    /// Returns exactly 0 when eta == 0.
    double sigma(int t_prev, int t_cur, double eta) const;

    /// CSV with header "t,alpha,alpha_bar", one row per step 1..T.
    std::string to_csv() const;

private:
    void check_step(int t, int lo, const char* what) const;

    std::vector<double> m_alpha;      // index 0 unused (1.0)
    std::vector<double> m_alpha_bar;  // index 0 == 1.0
};

/// Ordered subsequence tau = {t_1 < ... < t_S} of 1..T used for fast sampling.
class SamplingPlan {
public:
    /// Explicit tau; must be strictly increasing within [1, T].
    SamplingPlan(std::vector<int> tau, int steps, double eta = 0.0);

    /// Uniform plan tau = {T/S, 2T/S, ..., T}. Requires S | T.
    static SamplingPlan uniform(int steps, int sample_steps, double eta = 0.0);

    const std::vector<int>& tau() const { return m_tau; }
    int size() const { return static_cast<int>(m_tau.size()); }
    int steps() const { return m_steps; }
    double eta() const { return m_eta; }

private:
    std::vector<int> m_tau;
    int m_steps;
    double m_eta;
};

}  // namespace gsd
