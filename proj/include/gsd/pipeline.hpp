// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsd/codec.hpp"
#include "gsd/grid.hpp"
#include "gsd/predictor.hpp"
#include "gsd/sampler.hpp"
#include "gsd/schedule.hpp"

namespace gsd {

struct PipelineConfig {
    Dims dims{1, 16, 16};
    int steps = 1000;        // T
    int sample_steps = 10;   // S
    double eta = 0.0;        // must stay 0 on the hide/reveal paths
    double amplitude = 1.0;  // |DCT coefficient| carrying one bit
    std::uint64_t seed = 1;
    bool quantize = true;    // false passes float images straight to reveal

    /// Throws UsageError if S does not divide T, eta != 0 or dims are invalid.
    void validate() const;
};

struct HideResult {
    StegoImage image;  // quantized stego image
    Grid image_float;  // x_0 before quantization
    Grid latent;       // z_s
    std::optional<Trajectory> trajectory;
};

struct RevealResult {
    BitVector bits;
    Grid latent;  // recovered z'_s
    /// mean |c| / amplitude over the recovered DCT coefficients
    double mean_margin = 0.0;
    /// std(|c|) / mean(|c|): 0 for a clean +-amplitude code, about 0.76 when
    /// the recovered latent is Gaussian noise
    double magnitude_cv = 0.0;
};

/// Hides bits in a diffusion latent and recovers them by inversion.
/// Holds references to the predictor; it must outlive the pipeline.
class StegoPipeline {
public:
    StegoPipeline(PipelineConfig cfg, const NoisePredictor& model);

    const PipelineConfig& config() const { return m_cfg; }
    const NoiseSchedule& schedule() const { return m_schedule; }
    const SamplingPlan& plan() const { return m_plan; }
    std::size_t capacity() const { return m_cfg.dims.count(); }

    /// embed -> generate -> quantize.
    HideResult hide(const BitVector& d, bool record = false) const;
    /// Generates from the seeded Gaussian latent without embedding any data.
    HideResult hide_cover(bool record = false) const;

    /// dequantize -> invert -> extract.
    RevealResult reveal(const StegoImage& img) const;
    /// invert -> extract on a float image (quantization bypassed).
    RevealResult reveal_float(const Grid& x0) const;

    /// The sampled z ~ N(0, 1) of the configured seed. Embedding overwrites
    /// every DCT coefficient, so stego images do not depend on it.
    Grid sample_latent() const;

private:
    HideResult finish(Grid latent, bool record) const;

    PipelineConfig m_cfg;
    const NoisePredictor& m_model;
    NoiseSchedule m_schedule;
    SamplingPlan m_plan;
    EmbedLayout m_layout;
};

/// Fraction of positions where the two bit vectors agree.
double accuracy(const BitVector& d, const BitVector& d_prime);

/// Hidden bits per pixel-channel.
double bits_per_pixel(std::size_t bits, Dims dims);

struct ChannelStats {
    double mean = 0.0;
    double variance = 0.0;
};

/// Per-channel mean and variance pooled over a set of images.
std::vector<ChannelStats> channel_stats(std::span<const Grid> images);

/// Sum over channels of |mean_a - mean_b| + |var_a - var_b|. A sanity
/// diagnostic only; it is not comparable to feature-based image metrics.
double moment_distance(std::span<const ChannelStats> a, std::span<const ChannelStats> b);

struct SweepRow {
    int sample_steps = 0;
    double acc = 0.0;
    double mean_abs_latent_error = 0.0;
    double gen_time = 0.0;   // seconds per image
    double ext_time = 0.0;   // seconds per image
    double mean_time = 0.0;  // (gen_time + ext_time) / 2
    double moment_distance = 0.0;  // vs reference set, 0 when none given
};

struct EvalReport {
    double bpp = 0.0;
    std::size_t trials = 0;
    bool quantized = true;
    std::vector<SweepRow> rows;

    /// Header "S,acc,mean_abs_latent_error,gen_time,ext_time,mean_time".
    std::string to_csv() const;
    std::string summary() const;
};

/// Runs hide/reveal for `trials` random payloads at every S in the list.
/// Payloads are drawn from cfg.seed and shared across S values.
EvalReport sweep_steps(const PipelineConfig& cfg, const NoisePredictor& model, std::span<const int> sample_steps,
                       std::size_t trials, std::span<const Grid> reference = {});

/// Random payload of `count` bits.
BitVector random_bits(SeededRng& rng, std::size_t count);

/// Locale-independent shortest round-trip formatting of a double.
std::string format_double(double v);

}  // namespace gsd
