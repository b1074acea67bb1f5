// SPDX-License-Identifier: Apache-2.0
#include "gsd/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "gsd/dct.hpp"
#include "gsd/error.hpp"
#include "gsd/rng.hpp"

namespace gsd {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void PipelineConfig::validate() const {
    if (!dims.valid()) throw UsageError("pipeline dims must be positive");
    if (steps < 1) throw UsageError("T must be >= 1");
    if (sample_steps < 1 || sample_steps > steps || steps % sample_steps != 0) {
        throw UsageError("S=" + std::to_string(sample_steps) + " must divide T=" + std::to_string(steps));
    }
    if (eta != 0.0) throw UsageError("hide/reveal require eta = 0 (deterministic sampling)");
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw UsageError("amplitude must be positive");
}

StegoPipeline::StegoPipeline(PipelineConfig cfg, const NoisePredictor& model)
    : m_cfg(std::move(cfg)),
      m_model(model),
      m_schedule(NoiseSchedule::linear(m_cfg.steps)),
      m_plan(SamplingPlan::uniform(m_cfg.steps, m_cfg.sample_steps)) {
    m_cfg.validate();
    if (auto bound = model.bound_dims(); bound && *bound != m_cfg.dims) {
        throw DataError("model dims " + to_string(*bound) + " do not match pipeline dims " + to_string(m_cfg.dims));
    }
    m_layout.amplitude = m_cfg.amplitude;
}

Grid StegoPipeline::sample_latent() const {
    SeededRng rng(m_cfg.seed);
    return sample_gaussian(rng, m_cfg.dims);
}

HideResult StegoPipeline::finish(Grid latent, bool record) const {
    HideResult out;
    if (record) {
        out.trajectory = generate_trajectory(latent, m_plan, m_model, m_schedule);
        out.image_float = out.trajectory->states.back().x;
    } else {
        out.image_float = generate(latent, m_plan, m_model, m_schedule);
    }
    out.image = quantize(out.image_float);
    out.latent = std::move(latent);
    return out;
}

HideResult StegoPipeline::hide(const BitVector& d, bool record) const {
    if (d.size() != capacity()) {
        throw DataError("payload has " + std::to_string(d.size()) + " bits, capacity is " +
                        std::to_string(capacity()));
    }
    return finish(embed(d, m_cfg.dims, m_layout), record);
}

HideResult StegoPipeline::hide_cover(bool record) const { return finish(sample_latent(), record); }

RevealResult StegoPipeline::reveal(const StegoImage& img) const {
    if (img.dims != m_cfg.dims) {
        throw DataError("image dims " + to_string(img.dims) + " do not match model dims " + to_string(m_cfg.dims));
    }
    return reveal_float(dequantize(img));
}

RevealResult StegoPipeline::reveal_float(const Grid& x0) const {
    if (x0.dims() != m_cfg.dims) {
        throw DataError("image dims " + to_string(x0.dims()) + " do not match model dims " + to_string(m_cfg.dims));
    }
    RevealResult out;
    out.latent = invert(x0, m_plan, m_model, m_schedule);
    const Grid coeffs = dct2(out.latent);
    out.bits = extract_from_coefficients(coeffs, m_layout);
    const double n = static_cast<double>(coeffs.size());
    double sum = 0.0;
    for (double c : coeffs.values()) sum += std::abs(c);
    const double mean = sum / n;
    double var = 0.0;
    for (double c : coeffs.values()) var += (std::abs(c) - mean) * (std::abs(c) - mean);
    out.mean_margin = mean / m_cfg.amplitude;
    out.magnitude_cv = mean > 0.0 ? std::sqrt(var / n) / mean : 0.0;
    return out;
}

double accuracy(const BitVector& d, const BitVector& d_prime) {
    if (d.size() != d_prime.size()) {
        throw UsageError("accuracy: length mismatch " + std::to_string(d.size()) + " vs " +
                         std::to_string(d_prime.size()));
    }
    if (d.size() == 0) return 1.0;
    std::size_t same = 0;
    for (std::size_t i = 0; i < d.size(); ++i) same += d[i] == d_prime[i];
    return static_cast<double>(same) / static_cast<double>(d.size());
}

double bits_per_pixel(std::size_t bits, Dims dims) {
    if (!dims.valid()) throw UsageError("bits_per_pixel: dims must be positive");
    return static_cast<double>(bits) / static_cast<double>(dims.count());
}

std::vector<ChannelStats> channel_stats(std::span<const Grid> images) {
    if (images.empty()) return {};
    const Dims dims = images.front().dims();
    std::vector<ChannelStats> stats(dims.channels);
    const double n = static_cast<double>(images.size() * dims.plane());
    for (std::size_t c = 0; c < dims.channels; ++c) {
        double sum = 0.0;
        for (const Grid& g : images) {
            if (g.dims() != dims) throw UsageError("channel_stats: mixed dims");
            for (double v : g.channel(c)) sum += v;
        }
        const double mean = sum / n;
        double sq = 0.0;
        for (const Grid& g : images) {
            for (double v : g.channel(c)) sq += (v - mean) * (v - mean);
        }
        stats[c] = {mean, sq / n};
    }
    return stats;
}

double moment_distance(std::span<const ChannelStats> a, std::span<const ChannelStats> b) {
    if (a.size() != b.size()) throw UsageError("moment_distance: channel count mismatch");
    double d = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        d += std::abs(a[c].mean - b[c].mean) + std::abs(a[c].variance - b[c].variance);
    }
    return d;
}

BitVector random_bits(SeededRng& rng, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
    return BitVector(std::move(bits));
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

EvalReport sweep_steps(const PipelineConfig& cfg, const NoisePredictor& model, std::span<const int> sample_steps,
                       std::size_t trials, std::span<const Grid> reference) {
    if (trials < 1) throw UsageError("sweep needs at least one trial");
    if (sample_steps.empty()) throw UsageError("sweep needs at least one S value");

    SeededRng rng(cfg.seed);
    std::vector<BitVector> payloads;
    payloads.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) payloads.push_back(random_bits(rng, cfg.dims.count()));
    const auto ref_stats = channel_stats(reference);

    EvalReport report;
    report.bpp = bits_per_pixel(cfg.dims.count(), cfg.dims);
    report.trials = trials;
    report.quantized = cfg.quantize;
    for (int s : sample_steps) {
        PipelineConfig run = cfg;
        run.sample_steps = s;
        const StegoPipeline pipeline(run, model);

        SweepRow row;
        row.sample_steps = s;
        std::vector<Grid> generated;
        generated.reserve(trials);
        for (const BitVector& d : payloads) {
            auto start = Clock::now();
            HideResult hidden = pipeline.hide(d);
            row.gen_time += seconds_since(start);

            start = Clock::now();
            const RevealResult revealed =
                cfg.quantize ? pipeline.reveal(hidden.image) : pipeline.reveal_float(hidden.image_float);
            row.ext_time += seconds_since(start);

            row.acc += accuracy(d, revealed.bits);
            row.mean_abs_latent_error += mean_abs_diff(hidden.latent, revealed.latent);
            generated.push_back(dequantize(hidden.image));
        }
        const double n = static_cast<double>(trials);
        row.acc /= n;
        row.mean_abs_latent_error /= n;
        row.gen_time /= n;
        row.ext_time /= n;
        row.mean_time = 0.5 * (row.gen_time + row.ext_time);
        if (!ref_stats.empty()) row.moment_distance = moment_distance(channel_stats(generated), ref_stats);
        report.rows.push_back(row);
    }
    return report;
}

std::string EvalReport::to_csv() const {
    std::string out = "S,acc,mean_abs_latent_error,gen_time,ext_time,mean_time\n";
    for (const SweepRow& r : rows) {
        out += std::to_string(r.sample_steps) + ',' + format_double(r.acc) + ',' +
               format_double(r.mean_abs_latent_error) + ',' + format_double(r.gen_time) + ',' +
               format_double(r.ext_time) + ',' + format_double(r.mean_time) + '\n';
    }
    return out;
}

std::string EvalReport::summary() const {
    std::ostringstream os;
    os << "payload: " << format_double(bpp) << " bpp, " << trials << " trials, "
       << (quantized ? "quantized" : "float (quantization bypassed)") << " images\n";
    for (const SweepRow& r : rows) {
        os << "S=" << r.sample_steps << "  acc=" << format_double(r.acc)
           << "  latent_err=" << format_double(r.mean_abs_latent_error) << "  gen=" << format_double(r.gen_time)
           << "s  ext=" << format_double(r.ext_time) << "s  mean=" << format_double(r.mean_time) << "s";
        if (r.moment_distance != 0.0) {
            os << "  moment_dist=" << format_double(r.moment_distance) << " (diagnostic, not FID)";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace gsd
