// SPDX-License-Identifier: Apache-2.0
// gsd: train a toy denoiser, hide bits in generated images, reveal them.
#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gsd/codec.hpp"
#include "gsd/dataset.hpp"
#include "gsd/error.hpp"
#include "gsd/image_io.hpp"
#include "gsd/manifest.hpp"
#include "gsd/pipeline.hpp"
#include "gsd/sampler.hpp"
#include "gsd/schedule.hpp"
#include "gsd/tiny_denoiser.hpp"
#include "gsd/trainer.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gsd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

// A recovered latent whose |DCT coefficients| vary this much relative to
// their mean looks like Gaussian noise (0.76) rather than a +-amplitude code.
// Correct reveals with the toy model measured 0.33-0.55, a wrong checkpoint,
// a cover image or S=1 instead of 10 gave 0.67-1.35.
constexpr double kMismatchSpread = 0.62;

// Collects the flags of one subcommand so they can be layered over a JSON
// config file. Only flags actually given on the command line override.
class FlagSet {
public:
    explicit FlagSet(CLI::App* app) : m_app(app) {
        m_app->add_option("--config", m_config_path, "JSON file with default values for any flag");
    }

    template <class T>
    void option(const std::string& flag, const std::string& key, const std::string& help) {
        auto value = std::make_shared<T>();
        CLI::Option* opt = m_app->add_option(flag, *value, help);
        m_apply.push_back([opt, value, key](json& cfg) {
            if (opt->count() > 0) cfg[key] = *value;
        });
        m_keys.insert(key);
    }

    // A flag that stores `value` under `key` when present.
    void flag(const std::string& flag, const std::string& key, bool value, const std::string& help) {
        CLI::Option* opt = m_app->add_flag(flag, help);
        m_apply.push_back([opt, key, value](json& cfg) {
            if (opt->count() > 0) cfg[key] = value;
        });
        m_keys.insert(key);
    }

    json merged() const {
        json cfg = json::object();
        if (!m_config_path.empty()) {
            std::ifstream in(m_config_path);
            if (!in) throw UsageError("cannot open config file " + m_config_path);
            try {
                cfg = json::parse(in);
            } catch (const json::parse_error& e) {
                throw UsageError("config file " + m_config_path + " is not valid JSON: " + e.what());
            }
            if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
            for (const auto& [key, _] : cfg.items()) {
                if (!m_keys.count(key)) throw UsageError("unknown config key '" + key + "'");
            }
        }
        for (const auto& apply : m_apply) apply(cfg);
        return cfg;
    }

private:
    CLI::App* m_app;
    std::string m_config_path;
    std::vector<std::function<void(json&)>> m_apply;
    std::set<std::string> m_keys;
};

template <class T>
T get(const json& cfg, const std::string& key, T fallback) {
    if (!cfg.contains(key)) return fallback;
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw UsageError("config value '" + key + "' has the wrong type");
    }
}

std::string require(const json& cfg, const std::string& key, const std::string& flag) {
    const std::string value = get<std::string>(cfg, key, "");
    if (value.empty()) throw UsageError(flag + " is required");
    return value;
}

std::uint64_t parse_seed_text(const std::string& text, const std::string& source) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw UsageError(source + " is not an unsigned integer: '" + text + "'");
    }
    return v;
}

// Flag, then config file, then GSD_SEED, then 1.
std::uint64_t resolve_seed(json& cfg) {
    if (!cfg.contains("seed")) {
        if (const char* env = std::getenv("GSD_SEED"); env && *env) {
            cfg["seed"] = parse_seed_text(env, "GSD_SEED");
        } else {
            cfg["seed"] = std::uint64_t{1};
        }
    }
    const json& s = cfg["seed"];
    if (s.is_string()) return parse_seed_text(s.get<std::string>(), "seed");
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
        throw UsageError("seed must be a non-negative integer");
    }
    return s.get<std::uint64_t>();
}

void add_predictor_flags(FlagSet& f) {
    f.option<std::string>("--checkpoint", "checkpoint", "trained model file");
    f.option<std::string>("--oracle", "oracle", "analytic predictor instead of a checkpoint: zero | constant:<c>");
    f.option<std::string>("--dims", "dims", "image dims CxHxW (taken from the checkpoint when one is given)");
    f.option<int>("--T", "T", "diffusion steps of the schedule (default 1000)");
}

void add_sampling_flags(FlagSet& f) {
    f.option<int>("--S", "S", "sampling steps; must divide T (default 10)");
    f.option<double>("--amplitude", "amplitude", "DCT coefficient magnitude per bit (default 1)");
    f.option<std::uint64_t>("--seed", "seed", "seed (falls back to GSD_SEED, then 1)");
}

struct LoadedPredictor {
    std::unique_ptr<NoisePredictor> model;
    Dims dims;
    std::string checkpoint_sha256;
};

AnalyticOracle parse_oracle(const std::string& text) {
    if (text == "zero") return AnalyticOracle::zero();
    const std::string prefix = "constant:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string num = text.substr(prefix.size());
        double c = 0.0;
        const auto res = std::from_chars(num.data(), num.data() + num.size(), c);
        if (res.ec == std::errc{} && res.ptr == num.data() + num.size() && std::isfinite(c)) {
            return AnalyticOracle::constant(c);
        }
    }
    throw UsageError("--oracle must be 'zero' or 'constant:<number>', got '" + text + "'");
}

LoadedPredictor load_predictor(json& cfg) {
    const int steps = get<int>(cfg, "T", 1000);
    cfg["T"] = steps;
    if (steps < 1) throw UsageError("--T must be >= 1");
    const std::string checkpoint = get<std::string>(cfg, "checkpoint", "");
    const std::string oracle = get<std::string>(cfg, "oracle", "");
    if (checkpoint.empty() == oracle.empty()) throw UsageError("give exactly one of --checkpoint or --oracle");

    LoadedPredictor out;
    if (!oracle.empty()) {
        out.model = std::make_unique<AnalyticOracle>(parse_oracle(oracle));
        out.dims = parse_dims(get<std::string>(cfg, "dims", "1x16x16"));
    } else {
        const auto bytes = read_file(checkpoint);
        auto model = std::make_unique<TinyDenoiser>(TinyDenoiser::deserialize(bytes, steps));
        out.dims = model->dims();
        if (cfg.contains("dims") && parse_dims(get<std::string>(cfg, "dims", "")) != out.dims) {
            throw DataError("--dims " + get<std::string>(cfg, "dims", "") + " does not match checkpoint dims " +
                            to_string(out.dims));
        }
        out.checkpoint_sha256 = sha256_hex(bytes);
        out.model = std::move(model);
    }
    cfg["dims"] = to_string(out.dims);
    return out;
}

PipelineConfig pipeline_config(json& cfg, Dims dims, std::uint64_t seed) {
    PipelineConfig pc;
    pc.dims = dims;
    pc.steps = get<int>(cfg, "T", 1000);
    pc.sample_steps = get<int>(cfg, "S", 10);
    pc.amplitude = get<double>(cfg, "amplitude", 1.0);
    pc.quantize = get<bool>(cfg, "quantize", true);
    pc.seed = seed;
    cfg["S"] = pc.sample_steps;
    cfg["amplitude"] = pc.amplitude;
    cfg["quantize"] = pc.quantize;
    pc.validate();
    return pc;
}

void write_manifest(const fs::path& path, const std::string& command, const json& cfg, std::uint64_t seed,
                    const std::string& checkpoint_sha256) {
    RunManifest m;
    m.command = command;
    m.config = cfg;
    m.seed = seed;
    m.checkpoint_sha256 = checkpoint_sha256;
    m.write(path);
}

fs::path manifest_path(const fs::path& artifact) { return fs::path(artifact.string() + ".manifest.json"); }

void write_text(const fs::path& path, const std::string& text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Reads a stego image that is either a PGM/PPM or an unquantized grid file.
struct LoadedImage {
    std::optional<StegoImage> quantized;
    std::optional<Grid> raw;
    Dims dims() const { return quantized ? quantized->dims : raw->dims(); }
};

LoadedImage load_image(const fs::path& path) {
    const auto bytes = read_file(path);
    LoadedImage img;
    if (is_grid_file(bytes)) {
        img.raw = decode_grid(bytes);
    } else {
        img.quantized = decode_pnm(bytes);
    }
    return img;
}

std::vector<int> parse_int_list(const json& value) {
    std::vector<int> out;
    if (value.is_array()) {
        for (const auto& v : value) {
            if (!v.is_number_integer()) throw UsageError("S list must hold integers");
            out.push_back(v.get<int>());
        }
    } else if (value.is_number_integer()) {
        out.push_back(value.get<int>());
    } else if (value.is_string()) {
        std::stringstream ss(value.get<std::string>());
        std::string item;
        while (std::getline(ss, item, ',')) {
            int v = 0;
            const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
            if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
                throw UsageError("bad S list entry '" + item + "'");
            }
            out.push_back(v);
        }
    }
    if (out.empty()) throw UsageError("S list is empty");
    return out;
}

int cmd_train(const json& flags) {
    json cfg = flags;
    const std::uint64_t seed = resolve_seed(cfg);
    const Dims dims = parse_dims(get<std::string>(cfg, "dims", "1x16x16"));
    const int steps = get<int>(cfg, "T", 1000);
    const DatasetKind kind = parse_dataset_kind(get<std::string>(cfg, "dataset", "checkers"));
    const auto dataset_size = get<std::size_t>(cfg, "dataset_size", 2000);
    const auto hidden = get<std::uint32_t>(cfg, "hidden", TinyDenoiser::kDefaultHiddenDim);
    const auto embed = get<std::uint32_t>(cfg, "embed", TinyDenoiser::kDefaultTimeEmbedDim);
    const fs::path out = get<std::string>(cfg, "out", "model.gsdw");

    TrainConfig tc;
    tc.steps = get<int>(cfg, "steps", tc.steps);
    tc.batch = get<int>(cfg, "batch", tc.batch);
    tc.learning_rate = get<double>(cfg, "lr", tc.learning_rate);
    tc.input_noise_std = get<double>(cfg, "input_noise", tc.input_noise_std);
    tc.log_every = get<int>(cfg, "log_every", 0);
    tc.seed = seed;
    if (steps < 1) throw UsageError("--T must be >= 1");
    if (dataset_size < 1) throw UsageError("--dataset-size must be >= 1");
    if (hidden < 1 || embed < 2 || embed % 2 != 0) throw UsageError("--hidden must be >= 1 and --embed even and >= 2");

    cfg["dims"] = to_string(dims);
    cfg["T"] = steps;
    cfg["dataset"] = to_string(kind);
    cfg["dataset_size"] = dataset_size;
    cfg["hidden"] = hidden;
    cfg["embed"] = embed;
    cfg["steps"] = tc.steps;
    cfg["batch"] = tc.batch;
    cfg["lr"] = tc.learning_rate;
    cfg["input_noise"] = tc.input_noise_std;
    cfg["out"] = out.string();
    const fs::path loss_csv = get<std::string>(cfg, "loss_csv", out.string() + ".loss.csv");
    cfg["loss_csv"] = loss_csv.string();

    const auto data = synth_dataset(kind, dataset_size, dims, seed);
    const NoiseSchedule schedule = NoiseSchedule::linear(steps);
    TinyDenoiser model(dims, steps, seed, embed, hidden);

    // Snapshot while training so an interrupted run leaves something to
    // inspect; a failed run must not leave a usable-looking checkpoint.
    const fs::path partial = out.string() + ".partial";
    TrainReport report;
    try {
        report = train(model, data, tc, schedule, [&](const LossPoint& p) {
            std::cerr << "step " << p.step << " loss " << format_double(p.loss) << '\n';
            model.save(partial);
        });
    } catch (const NumericalError&) {
        std::error_code ec;
        fs::remove(partial, ec);
        fs::remove(out, ec);
        throw;
    }
    model.save(partial);
    fs::rename(partial, out);

    std::string csv = "step,loss\n";
    for (const LossPoint& p : report.curve) csv += std::to_string(p.step) + ',' + format_double(p.loss) + '\n';
    write_text(loss_csv, csv);
    write_manifest(manifest_path(out), "train", cfg, seed, sha256_hex(read_file(out)));
    std::cerr << "wrote " << out.string() << " (final loss " << format_double(report.final_loss) << ")\n";
    return kExitOk;
}

int cmd_hide(const json& flags) {
    json cfg = flags;
    const std::uint64_t seed = resolve_seed(cfg);
    LoadedPredictor pred = load_predictor(cfg);
    const PipelineConfig pc = pipeline_config(cfg, pred.dims, seed);
    const bool cover = get<bool>(cfg, "cover", false);
    const std::string default_out = pc.quantize ? (pc.dims.channels == 1 ? "stego.pgm" : "stego.ppm") : "stego.grid";
    const fs::path out = get<std::string>(cfg, "out", default_out);
    cfg["out"] = out.string();

    const StegoPipeline pipeline(pc, *pred.model);
    HideResult result;
    if (cover) {
        result = pipeline.hide_cover();
    } else {
        const std::string secret_path = require(cfg, "secret", "--secret");
        const auto secret = read_file(secret_path);
        const BitVector bits = BitVector::from_bytes(secret, pipeline.capacity());
        if (secret.size() > bytes_for_bits(pipeline.capacity())) {
            std::cerr << "note: secret has " << secret.size() << " bytes, only the first "
                      << bytes_for_bits(pipeline.capacity()) << " fit\n";
        }
        result = pipeline.hide(bits);
    }
    if (pc.quantize) {
        write_pnm(out, result.image);
    } else {
        write_file(out, encode_grid(result.image_float));
    }
    write_manifest(manifest_path(out), cover ? "hide --cover" : "hide", cfg, seed, pred.checkpoint_sha256);
    std::cerr << "wrote " << out.string() << '\n';
    return kExitOk;
}

int cmd_reveal(const json& flags) {
    json cfg = flags;
    const std::uint64_t seed = resolve_seed(cfg);
    LoadedPredictor pred = load_predictor(cfg);
    const LoadedImage img = load_image(require(cfg, "image", "--image"));
    if (img.dims() != pred.dims) {
        throw DataError("image dims " + to_string(img.dims()) + " do not match model dims " + to_string(pred.dims));
    }
    PipelineConfig pc = pipeline_config(cfg, pred.dims, seed);
    pc.quantize = img.quantized.has_value();
    cfg["quantize"] = pc.quantize;
    const fs::path out = get<std::string>(cfg, "out", "secret.bin");
    cfg["out"] = out.string();

    const StegoPipeline pipeline(pc, *pred.model);
    const RevealResult r = img.quantized ? pipeline.reveal(*img.quantized) : pipeline.reveal_float(*img.raw);
    const auto bytes = r.bits.to_bytes();
    write_file(out, bytes);
    write_manifest(manifest_path(out), "reveal", cfg, seed, pred.checkpoint_sha256);
    std::cerr << "wrote " << bytes.size() << " bytes to " << out.string() << "; mean |c|/amplitude "
              << format_double(r.mean_margin) << ", spread " << format_double(r.magnitude_cv) << '\n';
    if (r.magnitude_cv > kMismatchSpread) {
        std::cerr << "warning: recovered coefficients look like noise rather than a +-amplitude code; probable "
                     "mismatch of S, T or checkpoint between hide and reveal, or no data hidden\n";
    }
    return kExitOk;
}

int cmd_sweep(const json& flags) {
    json cfg = flags;
    const std::uint64_t seed = resolve_seed(cfg);
    LoadedPredictor pred = load_predictor(cfg);
    const std::vector<int> steps = parse_int_list(cfg.contains("S") ? cfg["S"] : json("10,50,100"));
    cfg["S"] = steps;
    const auto trials = get<std::size_t>(cfg, "trials", 100);
    cfg["trials"] = trials;

    PipelineConfig pc;
    pc.dims = pred.dims;
    pc.steps = get<int>(cfg, "T", 1000);
    pc.amplitude = get<double>(cfg, "amplitude", 1.0);
    pc.quantize = get<bool>(cfg, "quantize", true);
    pc.seed = seed;
    cfg["amplitude"] = pc.amplitude;
    cfg["quantize"] = pc.quantize;

    std::vector<Grid> reference;
    if (cfg.contains("dataset")) {
        reference = synth_dataset(parse_dataset_kind(get<std::string>(cfg, "dataset", "")), 500, pc.dims, seed);
    }
    const EvalReport report = sweep_steps(pc, *pred.model, steps, trials, reference);
    std::cerr << report.summary();
    if (cfg.contains("out")) {
        const fs::path out = get<std::string>(cfg, "out", "");
        write_text(out, report.to_csv());
        write_manifest(manifest_path(out), "sweep", cfg, seed, pred.checkpoint_sha256);
    } else {
        std::cout << report.to_csv();
    }
    return kExitOk;
}

int cmd_schedule(const json& flags) {
    json cfg = flags;
    const int steps = get<int>(cfg, "T", 1000);
    if (steps < 1) throw UsageError("--T must be >= 1");
    const std::string csv = NoiseSchedule::linear(steps).to_csv();
    if (cfg.contains("out")) {
        write_text(get<std::string>(cfg, "out", ""), csv);
    } else {
        std::cout << csv;
    }
    return kExitOk;
}

int cmd_trajectory(const json& flags) {
    json cfg = flags;
    const std::uint64_t seed = resolve_seed(cfg);
    LoadedPredictor pred = load_predictor(cfg);
    const std::string direction = get<std::string>(cfg, "direction", "generate");
    const double eta = get<double>(cfg, "eta", 0.0);
    const bool save_float = get<bool>(cfg, "float", false);
    const fs::path out = require(cfg, "out", "--out");
    cfg["direction"] = direction;
    cfg["eta"] = eta;

    PipelineConfig pc = pipeline_config(cfg, pred.dims, seed);
    const NoiseSchedule schedule = NoiseSchedule::linear(pc.steps);
    const SamplingPlan plan = SamplingPlan::uniform(pc.steps, pc.sample_steps, eta);
    const StegoPipeline pipeline(pc, *pred.model);

    Trajectory traj;
    if (direction == "generate") {
        Grid start;
        if (cfg.contains("secret")) {
            const auto secret = read_file(get<std::string>(cfg, "secret", ""));
            EmbedLayout layout;
            layout.amplitude = pc.amplitude;
            start = embed(BitVector::from_bytes(secret, pipeline.capacity()), pc.dims, layout);
        } else {
            start = pipeline.sample_latent();
        }
        if (eta == 0.0) {
            traj = generate_trajectory(start, plan, *pred.model, schedule);
        } else {
            SeededRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
            traj = generate_trajectory_stochastic(start, plan, *pred.model, schedule, rng);
        }
    } else if (direction == "invert") {
        if (eta != 0.0) throw UsageError("inversion is deterministic; --eta must be 0");
        const LoadedImage img = load_image(require(cfg, "image", "--image"));
        if (img.dims() != pred.dims) {
            throw DataError("image dims " + to_string(img.dims()) + " do not match model dims " + to_string(pred.dims));
        }
        traj = invert_trajectory(img.quantized ? dequantize(*img.quantized) : *img.raw, plan, *pred.model, schedule);
    } else {
        throw UsageError("--direction must be generate or invert");
    }

    fs::create_directories(out);
    const std::string ext = pc.dims.channels == 1 ? ".pgm" : ".ppm";
    for (const TrajectoryState& s : traj.states) {
        const std::string stem = "step_" + std::to_string(s.t);
        write_pnm(out / (stem + ext), quantize(s.x));
        if (save_float) write_file(out / (stem + ".grid"), encode_grid(s.x));
    }
    write_manifest(out / "manifest.json", "trajectory", cfg, seed, pred.checkpoint_sha256);
    std::cerr << "wrote " << traj.states.size() << " images to " << out.string() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generative steganography with a reversible toy diffusion model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::vector<std::pair<CLI::App*, std::function<int(const json&)>>> commands;
    std::vector<std::unique_ptr<FlagSet>> flagsets;
    auto add = [&](const std::string& name, const std::string& help, std::function<int(const json&)> run) {
        CLI::App* sub = app.add_subcommand(name, help);
        flagsets.push_back(std::make_unique<FlagSet>(sub));
        commands.emplace_back(sub, std::move(run));
        return flagsets.back().get();
    };

    FlagSet* train = add("train", "train the toy denoiser on a synthetic dataset", cmd_train);
    train->option<std::string>("--dims", "dims", "image dims CxHxW (default 1x16x16)");
    train->option<int>("--T", "T", "diffusion steps (default 1000)");
    train->option<int>("--steps", "steps", "optimizer steps (default 20000)");
    train->option<int>("--batch", "batch", "batch size (default 32)");
    train->option<double>("--lr", "lr", "Adam learning rate (default 1e-3)");
    train->option<double>("--input-noise", "input_noise", "std of noise added to training images (default 0.01)");
    train->option<std::string>("--dataset", "dataset", "blobs | gradients | checkers (default checkers)");
    train->option<std::size_t>("--dataset-size", "dataset_size", "number of synthetic images (default 2000)");
    train->option<std::uint32_t>("--hidden", "hidden", "hidden layer width (default 256)");
    train->option<std::uint32_t>("--embed", "embed", "time embedding size (default 16)");
    train->option<int>("--log-every", "log_every", "loss averaging window (default steps/50)");
    train->option<std::uint64_t>("--seed", "seed", "seed (falls back to GSD_SEED, then 1)");
    train->option<std::string>("--out", "out", "checkpoint path (default model.gsdw)");
    train->option<std::string>("--loss-csv", "loss_csv", "loss curve path (default <out>.loss.csv)");

    FlagSet* hide = add("hide", "hide a secret file in a generated image", cmd_hide);
    add_predictor_flags(*hide);
    add_sampling_flags(*hide);
    hide->option<std::string>("--secret", "secret", "file holding at least C*H*W/8 bytes");
    hide->flag("--cover", "cover", true, "generate from the seeded latent without hiding anything");
    hide->flag("--no-quantize", "quantize", false, "write the float image as a .grid file");
    hide->option<std::string>("--out", "out", "output image");

    FlagSet* reveal = add("reveal", "recover the secret from a stego image", cmd_reveal);
    add_predictor_flags(*reveal);
    add_sampling_flags(*reveal);
    reveal->option<std::string>("--image", "image", "PGM/PPM stego image or .grid float image");
    reveal->option<std::string>("--out", "out", "recovered secret (default secret.bin)");

    FlagSet* sweep = add("sweep", "accuracy and timing over several S values", cmd_sweep);
    add_predictor_flags(*sweep);
    sweep->option<std::string>("--S", "S", "comma separated S values (default 10,50,100)");
    sweep->option<double>("--amplitude", "amplitude", "DCT coefficient magnitude per bit (default 1)");
    sweep->option<std::uint64_t>("--seed", "seed", "payload seed (falls back to GSD_SEED, then 1)");
    sweep->option<std::size_t>("--trials", "trials", "random payloads per S (default 100)");
    sweep->option<std::string>("--dataset", "dataset", "also report moment distance to this synthetic set");
    sweep->flag("--no-quantize", "quantize", false, "pass float images straight to reveal");
    sweep->option<std::string>("--out", "out", "CSV path (stdout when absent)");

    FlagSet* schedule = add("schedule", "dump the noise schedule as CSV", cmd_schedule);
    schedule->option<int>("--T", "T", "diffusion steps (default 1000)");
    schedule->option<std::string>("--out", "out", "CSV path (stdout when absent)");

    FlagSet* trajectory = add("trajectory", "write one image per sampling node", cmd_trajectory);
    add_predictor_flags(*trajectory);
    add_sampling_flags(*trajectory);
    trajectory->option<std::string>("--direction", "direction", "generate | invert (default generate)");
    trajectory->option<double>("--eta", "eta", "stochasticity of generation (default 0)");
    trajectory->option<std::string>("--secret", "secret", "secret to embed (generate; seeded latent when absent)");
    trajectory->option<std::string>("--image", "image", "image to invert");
    trajectory->flag("--float", "float", true, "also write unquantized step_<t>.grid files");
    trajectory->option<std::string>("--out", "out", "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (commands[i].first->parsed()) return commands[i].second(flagsets[i]->merged());
        }
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
