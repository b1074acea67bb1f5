// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gsd/image_io.hpp"
#include "gsd/rng.hpp"
#include "gsd/schedule.hpp"

namespace fs = std::filesystem;
using namespace gsd;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Workspace {
public:
    Workspace() {
        static int counter = 0;
        m_dir = fs::temp_directory_path() /
                ("gsd_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(m_dir);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(m_dir, ec);
    }

    fs::path operator/(const std::string& name) const { return m_dir / name; }

    // Runs the CLI inside the workspace; `env` is prepended verbatim.
    RunResult run(const std::string& args, const std::string& env = "") const {
        const std::string cmd = "cd '" + m_dir.string() + "' && " + env + " '" + GSD_CLI_PATH + "' " + args +
                                " > stdout.txt 2> stderr.txt";
        const int status = std::system(cmd.c_str());
        RunResult r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(m_dir / "stdout.txt");
        r.err = slurp(m_dir / "stderr.txt");
        return r;
    }

    void write_secret(const std::string& name, std::size_t bytes, std::uint64_t seed = 1) const {
        SeededRng rng(seed);
        std::vector<std::uint8_t> data(bytes);
        for (auto& b : data) b = static_cast<std::uint8_t>(rng.index(256));
        write_file(m_dir / name, data);
    }

private:
    fs::path m_dir;
};

}  // namespace

TEST_CASE("exact path hide/reveal is an identity on bytes") {
    Workspace ws;
    ws.write_secret("secret.bin", 32);
    REQUIRE(ws.run("hide --oracle constant:0.3 --secret secret.bin --no-quantize --out stego.grid").code == 0);
    const auto r = ws.run("reveal --oracle constant:0.3 --image stego.grid --out back.bin");
    REQUIRE(r.code == 0);
    CHECK(slurp(ws / "back.bin") == slurp(ws / "secret.bin"));
    CHECK(r.err.find("warning") == std::string::npos);

    // Same on a 3-channel grid, where the payload is 3 * 8 * 8 / 8 = 24 bytes.
    ws.write_secret("rgb.bin", 24, 5);
    REQUIRE(ws.run("hide --oracle constant:-0.2 --dims 3x8x8 --S 50 --secret rgb.bin --no-quantize --out c.grid")
                .code == 0);
    REQUIRE(ws.run("reveal --oracle constant:-0.2 --dims 3x8x8 --S 50 --image c.grid --out rgb_back.bin").code == 0);
    CHECK(slurp(ws / "rgb_back.bin") == slurp(ws / "rgb.bin"));
}

TEST_CASE("hide writes a reproducible PGM and a manifest") {
    Workspace ws;
    ws.write_secret("secret.bin", 32);
    REQUIRE(ws.run("hide --oracle zero --secret secret.bin --S 10 --out a.pgm").code == 0);
    REQUIRE(ws.run("hide --oracle zero --secret secret.bin --S 10 --out b.pgm").code == 0);
    const std::string a = slurp(ws / "a.pgm");
    CHECK(a == slurp(ws / "b.pgm"));
    CHECK(a.rfind("P5\n16 16\n255\n", 0) == 0);
    CHECK(a.size() == std::string("P5\n16 16\n255\n").size() + 256);

    const auto manifest = nlohmann::json::parse(slurp(ws / "a.pgm.manifest.json"));
    CHECK(manifest["command"] == "hide");
    CHECK(manifest["secret_bit_order"] == "msb-first");
    CHECK(manifest["config"]["S"] == 10);
    CHECK(manifest["config"]["T"] == 1000);
    CHECK(manifest["config"]["dims"] == "1x16x16");
    CHECK(manifest["config"]["amplitude"] == 1.0);
    CHECK(manifest["seed"] == 1);

    REQUIRE(ws.run("hide --oracle zero --dims 3x4x4 --secret secret.bin --out c.ppm").code == 0);
    CHECK(slurp(ws / "c.ppm").rfind("P6\n4 4\n255\n", 0) == 0);
}

TEST_CASE("hide rejects short secrets and bad plans") {
    Workspace ws;
    ws.write_secret("short.bin", 31);
    const auto r = ws.run("hide --oracle zero --secret short.bin --out x.pgm");
    CHECK(r.code == 2);
    CHECK(r.err.find("requires 32 bytes") != std::string::npos);
    CHECK_FALSE(fs::exists(ws / "x.pgm"));

    ws.write_secret("secret.bin", 32);
    CHECK(ws.run("hide --oracle zero --secret secret.bin --S 7").code == 1);
    CHECK(ws.run("hide --oracle bogus --secret secret.bin").code == 1);
    CHECK(ws.run("hide --secret secret.bin").code == 1);
    CHECK(ws.run("hide --oracle zero --checkpoint nope.gsdw --secret secret.bin").code == 1);
    CHECK(ws.run("hide --oracle zero --secret missing.bin").code == 2);
    CHECK(ws.run("hide --oracle zero --secret secret.bin --no-such-flag").code == 1);
    CHECK(ws.run("").code == 1);
}

TEST_CASE("config file supplies defaults and flags override it") {
    Workspace ws;
    ws.write_secret("secret.bin", 32);
    {
        std::ofstream(ws / "cfg.json") << R"({"oracle": "constant:0.1", "S": 7, "secret": "secret.bin"})";
    }
    CHECK(ws.run("hide --config cfg.json --out a.pgm").code == 1);
    REQUIRE(ws.run("hide --config cfg.json --S 20 --out a.pgm").code == 0);
    const auto manifest = nlohmann::json::parse(slurp(ws / "a.pgm.manifest.json"));
    CHECK(manifest["config"]["S"] == 20);
    CHECK(manifest["config"]["oracle"] == "constant:0.1");

    REQUIRE(ws.run("hide --oracle constant:0.1 --S 20 --secret secret.bin --out b.pgm").code == 0);
    CHECK(slurp(ws / "a.pgm") == slurp(ws / "b.pgm"));

    { std::ofstream(ws / "bad.json") << R"({"oracle": "zero", "colour": 3})"; }
    CHECK(ws.run("hide --config bad.json --secret secret.bin").code == 1);
    { std::ofstream(ws / "broken.json") << "{"; }
    CHECK(ws.run("hide --config broken.json --secret secret.bin").code == 1);
}

TEST_CASE("GSD_SEED is the seed fallback") {
    Workspace ws;
    REQUIRE(ws.run("train --steps 5 --hidden 8 --dims 1x4x4 --out m.gsdw").code == 0);
    REQUIRE(ws.run("hide --checkpoint m.gsdw --cover --out env.pgm", "GSD_SEED=7").code == 0);
    REQUIRE(ws.run("hide --checkpoint m.gsdw --cover --seed 7 --out flag.pgm", "GSD_SEED=8").code == 0);
    REQUIRE(ws.run("hide --checkpoint m.gsdw --cover --out other.pgm", "GSD_SEED=8").code == 0);
    CHECK(slurp(ws / "env.pgm") == slurp(ws / "flag.pgm"));
    CHECK(slurp(ws / "env.pgm") != slurp(ws / "other.pgm"));
    CHECK(nlohmann::json::parse(slurp(ws / "env.pgm.manifest.json"))["seed"] == 7);
    CHECK(ws.run("hide --checkpoint m.gsdw --cover", "GSD_SEED=abc").code == 1);
}

TEST_CASE("train writes a deterministic checkpoint and loss curve") {
    Workspace ws;
    const std::string args = "train --dims 1x4x4 --T 100 --steps 40 --batch 8 --hidden 16 --log-every 10 --seed 3";
    REQUIRE(ws.run(args + " --out a.gsdw").code == 0);
    REQUIRE(ws.run(args + " --out b.gsdw").code == 0);
    CHECK(slurp(ws / "a.gsdw") == slurp(ws / "b.gsdw"));
    CHECK(slurp(ws / "a.gsdw").rfind("GSDW", 0) == 0);
    CHECK_FALSE(fs::exists(ws / "a.gsdw.partial"));

    std::istringstream csv(slurp(ws / "a.gsdw.loss.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "step,loss");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 4);

    const auto manifest = nlohmann::json::parse(slurp(ws / "a.gsdw.manifest.json"));
    CHECK(manifest["command"] == "train");
    CHECK(manifest["config"]["steps"] == 40);
    CHECK(manifest["checkpoint_sha256"].get<std::string>().size() == 64);

    CHECK(ws.run("train --steps 0 --out z.gsdw").code == 1);
    CHECK(ws.run("train --dataset faces --out z.gsdw").code == 1);
    CHECK_FALSE(fs::exists(ws / "z.gsdw"));
}

TEST_CASE("train aborts on a non-finite loss and leaves no checkpoint") {
    Workspace ws;
    const auto r = ws.run("train --dims 1x4x4 --steps 50 --hidden 16 --lr 1e200 --log-every 1 --out nan.gsdw");
    CHECK(r.code == 3);
    CHECK(r.err.find("non-finite") != std::string::npos);
    CHECK_FALSE(fs::exists(ws / "nan.gsdw"));
    CHECK_FALSE(fs::exists(ws / "nan.gsdw.partial"));
}

TEST_CASE("reveal checks dims and flags weak margins") {
    Workspace ws;
    ws.write_secret("secret.bin", 32);
    REQUIRE(ws.run("hide --oracle constant:0.3 --secret secret.bin --out s.pgm").code == 0);
    REQUIRE(ws.run("hide --oracle constant:0.3 --secret secret.bin --no-quantize --out s.grid").code == 0);
    CHECK(ws.run("reveal --oracle constant:0.3 --dims 1x8x8 --image s.pgm").code == 2);
    REQUIRE(ws.run("train --dims 1x8x8 --steps 2 --hidden 8 --out m.gsdw").code == 0);
    CHECK(ws.run("reveal --checkpoint m.gsdw --image s.pgm").code == 2);
    CHECK(ws.run("reveal --oracle zero --image missing.pgm").code == 2);

    // A cover image carries no code: the zero oracle recovers its Gaussian latent exactly.
    REQUIRE(ws.run("hide --oracle zero --cover --no-quantize --out cover.grid").code == 0);
    const auto r = ws.run("reveal --oracle zero --image cover.grid --out w.bin");
    CHECK(r.code == 0);
    CHECK(r.err.find("probable mismatch") != std::string::npos);
    const auto ok = ws.run("reveal --oracle constant:0.3 --image s.grid --out ok.bin");
    CHECK(ok.code == 0);
    CHECK(ok.err.find("probable mismatch") == std::string::npos);
    CHECK(fs::file_size(ws / "ok.bin") == 32);
}

TEST_CASE("schedule dump") {
    Workspace ws;
    const auto r = ws.run("schedule --T 1000");
    REQUIRE(r.code == 0);
    std::istringstream csv(r.out);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,alpha,alpha_bar");
    int rows = 0;
    std::string first;
    while (std::getline(csv, line)) {
        if (rows++ == 0) first = line;
    }
    CHECK(rows == 1000);
    CHECK(first.rfind("1,0.9999", 0) == 0);
    REQUIRE(ws.run("schedule --T 10 --out s.csv").code == 0);
    CHECK(slurp(ws / "s.csv") == NoiseSchedule::linear(10).to_csv());
    CHECK(ws.run("schedule --T 0").code == 1);
}

TEST_CASE("sweep emits one CSV row per S") {
    Workspace ws;
    const auto r = ws.run("sweep --oracle constant:0.1 --dims 1x8x8 --S 10,50,100 --trials 2 --no-quantize");
    REQUIRE(r.code == 0);
    std::istringstream csv(r.out);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "S,acc,mean_abs_latent_error,gen_time,ext_time,mean_time");
    std::vector<std::string> rows;
    while (std::getline(csv, line)) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].rfind("10,1,", 0) == 0);
    CHECK(rows[1].rfind("50,1,", 0) == 0);
    CHECK(rows[2].rfind("100,1,", 0) == 0);
    CHECK(ws.run("sweep --oracle zero --S 10,x").code == 1);
}

TEST_CASE("trajectory export") {
    Workspace ws;
    ws.write_secret("secret.bin", 32);
    REQUIRE(ws.run("trajectory --oracle zero --secret secret.bin --S 10 --float --out gen").code == 0);
    int images = 0;
    for (const auto& entry : fs::directory_iterator(ws / "gen")) images += entry.path().extension() == ".pgm";
    CHECK(images == 11);
    CHECK(fs::exists(ws / "gen" / "step_1000.pgm"));
    CHECK(fs::exists(ws / "gen" / "step_0.pgm"));

    // Zero oracle: every state is a positive multiple of the latent.
    const Grid start = decode_grid(read_file(ws / "gen" / "step_1000.grid"));
    for (int t : {0, 100, 500, 900}) {
        const Grid x = decode_grid(read_file(ws / "gen" / ("step_" + std::to_string(t) + ".grid")));
        double xy = 0.0, xx = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            xy += x[i] * start[i];
            xx += x[i] * x[i];
            yy += start[i] * start[i];
        }
        CHECK(xy / std::sqrt(xx * yy) == doctest::Approx(1.0).epsilon(1e-12));
    }

    REQUIRE(ws.run("trajectory --oracle zero --direction invert --image gen/step_0.grid --float --out inv").code == 0);
    const Grid back = decode_grid(read_file(ws / "inv" / "step_1000.grid"));
    CHECK(max_abs_diff(back, start) < 1e-12);

    CHECK(ws.run("trajectory --oracle zero --direction sideways --out x").code == 1);
    CHECK(ws.run("trajectory --oracle zero --direction invert --eta 0.5 --image gen/step_0.pgm --out x").code == 1);
    REQUIRE(ws.run("trajectory --oracle constant:0.1 --eta 1 --S 5 --out sto").code == 0);
    REQUIRE(ws.run("trajectory --oracle constant:0.1 --eta 1 --S 5 --out sto2").code == 0);
    CHECK(slurp(ws / "sto" / "step_0.pgm") == slurp(ws / "sto2" / "step_0.pgm"));
}
