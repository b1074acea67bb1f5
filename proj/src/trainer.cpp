// SPDX-License-Identifier: Apache-2.0
#include "gsd/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gsd/error.hpp"
#include "gsd/rng.hpp"

namespace gsd {

Grid forward_diffuse(const Grid& x0, int t, const Grid& eps, const NoiseSchedule& schedule) {
    require_same_dims(x0, eps, "forward_diffuse");
    const double ab = schedule.alpha_bar(t);
    return axpby(std::sqrt(ab), x0, std::sqrt(1.0 - ab), eps);
}

double loss_simple(const NoisePredictor& pred, const Grid& x0, int t, const Grid& eps,
                   const NoiseSchedule& schedule) {
    const Grid xt = forward_diffuse(x0, t, eps, schedule);
    const Grid out = pred.predict(xt, t);
    require_same_dims(out, eps, "loss_simple");
    double s = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double d = eps[i] - out[i];
        s += d * d;
    }
    return s / static_cast<double>(eps.size());
}

TrainReport train(TinyDenoiser& model, std::span<const Grid> dataset, const TrainConfig& cfg,
                  const NoiseSchedule& schedule, const TrainProgress& progress) {
    if (dataset.empty()) throw UsageError("train: dataset is empty");
    if (cfg.steps < 1) throw UsageError("train: steps must be >= 1");
    if (cfg.batch < 1) throw UsageError("train: batch must be >= 1");
    if (!(cfg.learning_rate >= 0.0) || !(cfg.input_noise_std >= 0.0)) {
        throw UsageError("train: learning rate and input noise must be non-negative");
    }
    for (const Grid& img : dataset) {
        if (img.dims() != model.dims()) {
            throw UsageError("train: dataset dims " + to_string(img.dims()) + " do not match model dims " +
                             to_string(model.dims()));
        }
    }

    const auto n = static_cast<Eigen::Index>(model.dims().count());
    const auto batch = static_cast<Eigen::Index>(cfg.batch);
    const int log_every = cfg.log_every > 0 ? cfg.log_every : std::max(1, cfg.steps / 50);
    const int T = schedule.steps();

    SeededRng rng(cfg.seed);
    auto params = model.parameters();
    std::vector<double> grad;
    std::vector<double> m(params.size(), 0.0);
    std::vector<double> v(params.size(), 0.0);
    double beta1_pow = 1.0;
    double beta2_pow = 1.0;

    Eigen::MatrixXd noisy(n, batch);
    Eigen::MatrixXd targets(n, batch);
    std::vector<int> steps(static_cast<std::size_t>(batch));

    TrainReport report;
    double window_sum = 0.0;
    int window_count = 0;

    for (int step = 1; step <= cfg.steps; ++step) {
        for (Eigen::Index j = 0; j < batch; ++j) {
            const Grid& x0 = dataset[rng.index(dataset.size())];
            const int t = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(T)));
            const double ab = schedule.alpha_bar(t);
            const double a = std::sqrt(ab);
            const double b = std::sqrt(1.0 - ab);
            steps[static_cast<std::size_t>(j)] = t;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double clean = x0[static_cast<std::size_t>(i)] + cfg.input_noise_std * rng.normal();
                const double eps = rng.normal();
                noisy(i, j) = a * clean + b * eps;
                targets(i, j) = eps;
            }
        }

        const double loss = model.batch_loss(noisy, steps, targets, &grad);
        if (!std::isfinite(loss)) {
            std::ostringstream msg;
            msg << "train: loss became non-finite at step " << step << " (learning rate " << cfg.learning_rate << ")";
            throw NumericalError(msg.str());
        }
        if (step == 1) report.initial_loss = loss;

        beta1_pow *= cfg.beta1;
        beta2_pow *= cfg.beta2;
        const double lr_hat = cfg.learning_rate * std::sqrt(1.0 - beta2_pow) / (1.0 - beta1_pow);
        for (std::size_t k = 0; k < params.size(); ++k) {
            m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * grad[k];
            v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
            params[k] -= lr_hat * m[k] / (std::sqrt(v[k]) + cfg.adam_epsilon);
        }

        window_sum += loss;
        ++window_count;
        if (step % log_every == 0 || step == cfg.steps) {
            const LossPoint point{step, window_sum / window_count};
            report.curve.push_back(point);
            if (progress) progress(point);
            window_sum = 0.0;
            window_count = 0;
        }
    }
    report.final_loss = report.curve.back().loss;
    return report;
}

GradientCheckResult gradient_check(const TinyDenoiser& model, const Grid& x0, int t, const NoiseSchedule& schedule,
                                   std::uint64_t seed, std::size_t samples) {
    if (x0.dims() != model.dims()) throw UsageError("gradient_check: dims mismatch");
    SeededRng rng(seed);
    const Grid eps = sample_gaussian(rng, x0.dims());
    const Grid xt = forward_diffuse(x0, t, eps, schedule);

    const auto n = static_cast<Eigen::Index>(x0.size());
    const Eigen::MatrixXd noisy = Eigen::Map<const Eigen::VectorXd>(xt.values().data(), n);
    const Eigen::MatrixXd target = Eigen::Map<const Eigen::VectorXd>(eps.values().data(), n);
    const int step_index[] = {t};

    std::vector<double> analytic;
    model.batch_loss(noisy, step_index, target, &analytic);

    TinyDenoiser probe = model;
    auto params = probe.parameters();
    constexpr double h = 1e-5;
    GradientCheckResult result;
    const std::size_t count = std::min(samples, params.size());
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t k = rng.index(params.size());
        const double saved = params[k];
        params[k] = saved + h;
        const double up = probe.batch_loss(noisy, step_index, target, nullptr);
        params[k] = saved - h;
        const double down = probe.batch_loss(noisy, step_index, target, nullptr);
        params[k] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(analytic[k]), std::abs(numeric), 1e-6});
        result.max_relative_error = std::max(result.max_relative_error, std::abs(analytic[k] - numeric) / denom);
        ++result.checked;
    }
    return result;
}

}  // namespace gsd
