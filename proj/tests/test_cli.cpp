#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cli_support.hpp"
#include "radoppler/cli.hpp"
#include "radoppler/ingest.hpp"
#include "radoppler/keyvalue.hpp"
#include "radoppler/simulator.hpp"
#include "support.hpp"

using namespace radoppler;
using namespace radoppler::test;

namespace {

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "radoppler");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string p(const TempDir& dir, const std::string& name) { return (dir / name).string(); }

void write_scenario(const TempDir& dir, const std::string& name, std::size_t chirps,
                    std::vector<ScattererSpec> scatterers, double noise = 0.0) {
    Scenario sc;
    sc.params.num_chirps = chirps;
    sc.scatterers = std::move(scatterers);
    sc.noise_power = noise;
    sc.seed = 5;
    sc.to_keyvalue().save(dir / name);
}

std::vector<std::vector<double>> read_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("cli pipeline runs end to end") {
    TempDir dir;
    write_scenario(dir, "s.scenario", 512, {{2.0, 0.0, 0.6, 2.0, 0.0, 1.0}}, 0.01);
    write_text_file(dir / "c.cfg", "window_length = 64\nhop = 16\nfft_length = 128\n");
    REQUIRE(run({"simulate", p(dir, "s.scenario"), p(dir, "cube")}) == 0);
    CHECK(std::filesystem::exists(dir / "cube.iq"));
    CHECK(std::filesystem::exists(dir / "cube.meta"));
    CHECK(std::filesystem::exists(dir / "cube.manifest"));
    REQUIRE(run({"spectrogram", p(dir, "cube.iq"), p(dir, "c.cfg"), p(dir, "spec.bin")}) == 0);
    REQUIRE(run({"spectrogram", p(dir, "cube.iq"), p(dir, "c.cfg"), p(dir, "spec.csv"), "--format", "csv"}) == 0);
    REQUIRE(run({"spectrogram", p(dir, "cube.iq"), p(dir, "c.cfg"), p(dir, "spec.pgm"), "--format", "pgm"}) == 0);
    REQUIRE(run({"ra", p(dir, "spec.bin"), p(dir, "c.cfg"), p(dir, "ra.bin"), "--M", "16"}) == 0);
    REQUIRE(run({"ra", p(dir, "cube.iq"), p(dir, "c.cfg"), p(dir, "ra_cube.bin"), "--M", "16"}) == 0);
    REQUIRE(run({"track", p(dir, "spec.bin"), p(dir, "track.csv")}) == 0);
    REQUIRE(run({"track", p(dir, "ra.bin"), p(dir, "ra_track.csv")}) == 0);

    const RealMatrix bin = load_matrix(dir / "spec.bin");
    const RealMatrix csv = load_matrix(dir / "spec.csv");
    REQUIRE(bin.rows() == csv.rows());
    REQUIRE(bin.cols() == csv.cols());
    CHECK(bin.cols() == 128);
    CHECK((bin - csv).cwiseAbs().maxCoeff() <= 1e-9 * bin.cwiseAbs().maxCoeff());

    CHECK(load_matrix(dir / "ra.bin") == load_matrix(dir / "ra_cube.bin"));
    CHECK(load_matrix(dir / "ra.bin").cols() == 32);

    const auto meta = KeyValueFile::load(dir / "ra.bin.meta");
    CHECK(meta.require("kind") == "ra_spectrogram");
    CHECK(meta.require("corner_mode") == "detected");
    const auto manifest = KeyValueFile::load(dir / "ra.bin.manifest");
    CHECK(manifest.require("command") == "ra");
    CHECK(manifest.contains("ra.f_c_hz"));
    CHECK(manifest.require("config.num_filters") == "16");
    CHECK(manifest.find_all("input").size() == 3);
    CHECK(manifest.find_all("output").size() == 2);
    CHECK(manifest.entries().back().first == "timestamp");

    CHECK(read_csv(slurp(dir / "ra_track.csv")).size() == static_cast<std::size_t>(bin.rows()));
    CHECK(slurp(dir / "track.csv").rfind("frame_time,raw_peak,smoothed\n", 0) == 0);
}

TEST_CASE("cli outputs are reproducible") {
    TempDir dir;
    write_scenario(dir, "s.scenario", 256, {{2.0, 0.4, 0.3, 3.0, 0.0, 1.0}}, 0.05);
    write_text_file(dir / "c.cfg", "fft_length = 128\nwindow_length = 64\n");
    for (const char* tag : {"a", "b"}) {
        const std::string t = tag;
        REQUIRE(run({"simulate", p(dir, "s.scenario"), p(dir, "cube_" + t)}) == 0);
        REQUIRE(run({"spectrogram", p(dir, "cube_" + t + ".iq"), p(dir, "c.cfg"), p(dir, "spec_" + t + ".bin")}) == 0);
    }
    CHECK(slurp(dir / "cube_a.iq") == slurp(dir / "cube_b.iq"));
    CHECK(slurp(dir / "spec_a.bin") == slurp(dir / "spec_b.bin"));
    CHECK(slurp(dir / "spec_a.bin.meta") == slurp(dir / "spec_b.bin.meta"));
}

TEST_CASE("forced corner is recorded") {
    TempDir dir;
    write_scenario(dir, "s.scenario", 256, {{2.0, 0.0, 0.5, 4.0, 0.0, 1.0}});
    write_text_file(dir / "c.cfg", "num_filters = 16\n");
    REQUIRE(run({"simulate", p(dir, "s.scenario"), p(dir, "cube")}) == 0);
    REQUIRE(run({"ra", p(dir, "cube.iq"), p(dir, "c.cfg"), p(dir, "ra.csv"), "--force-fc", "50", "--format", "csv"}) ==
            0);
    const auto manifest = KeyValueFile::load(dir / "ra.csv.manifest");
    CHECK(manifest.require_double("ra.forced_fc_hz") == 50.0);
    CHECK(manifest.require("ra.corner_mode") == "forced");
    CHECK(manifest.require_double("ra.f_c_hz") == doctest::Approx(50.0));
}

TEST_CASE("track defaults match the explicit default flags") {
    TempDir dir;
    write_scenario(dir, "s.scenario", 1024, {{2.0, 0.5, 0.0, 0.0, 0.0, 1.0}});
    write_text_file(dir / "c.cfg", "");
    REQUIRE(run({"simulate", p(dir, "s.scenario"), p(dir, "cube")}) == 0);
    REQUIRE(run({"spectrogram", p(dir, "cube.iq"), p(dir, "c.cfg"), p(dir, "spec.bin")}) == 0);
    REQUIRE(run({"track", p(dir, "spec.bin"), p(dir, "t1.csv")}) == 0);
    REQUIRE(run({"track", p(dir, "spec.bin"), p(dir, "t2.csv"), "--q", "10", "--r", "4"}) == 0);
    CHECK(slurp(dir / "t1.csv") == slurp(dir / "t2.csv"));

    // Constant-velocity target: the smoothed track settles on the raw peak.
    const auto rows = read_csv(slurp(dir / "t1.csv"));
    REQUIRE(rows.size() > 30);
    const double expected = doppler_shift(0.5, 77e9);
    for (std::size_t t = 20; t < rows.size(); ++t) {
        CHECK(rows[t][1] == rows[20][1]);
        CHECK(std::abs(rows[t][2] - rows[t][1]) < 1e-6);
        CHECK(std::abs(rows[t][1] - expected) <= 2000.0 / 256.0);
    }
}

TEST_CASE("cli error exits") {
    TempDir dir;
    write_text_file(dir / "c.cfg", "");

    SUBCASE("aliasing scenario names the scatterer") {
        write_scenario(dir, "bad.scenario", 64, {{2.0, 0.0, 0.0, 0.0, 0.0, 1.0}, {2.0, 2.5, 0.0, 0.0, 0.0, 1.0}});
        CHECK(run_tool({"simulate", "bad.scenario", "cube"}, dir.path(), dir / "err.txt") == 2);
        CHECK(slurp(dir / "err.txt").find("scatterer 1") != std::string::npos);
        CHECK_FALSE(std::filesystem::exists(dir / "cube.iq"));
    }
    SUBCASE("missing sidecar") {
        write_matrix(RealMatrix(RealMatrix::Ones(4, 8)), dir / "m.bin", MatrixFormat::bin);
        CHECK(run({"ra", p(dir, "m.bin"), p(dir, "c.cfg"), p(dir, "out.bin")}) == 2);
        CHECK(run({"track", p(dir, "m.bin"), p(dir, "t.csv")}) == 2);
    }
    SUBCASE("all-zero cube is degenerate") {
        RadarCube cube;
        cube.params.num_chirps = 256;
        cube.samples = SampleMatrix::Zero(64, 256);
        write_radar_cube(cube, dir / "zero");
        CHECK(run_tool({"ra", "zero.iq", "c.cfg", "out.bin"}, dir.path(), dir / "err.txt") == 2);
        CHECK(slurp(dir / "err.txt").find("degenerate input") != std::string::npos);
    }
    SUBCASE("missing inputs and bad arguments") {
        CHECK(run({"track", p(dir, "nothing.bin"), p(dir, "t.csv")}) == 2);
        CHECK(run({"simulate", p(dir, "nothing.scenario"), p(dir, "cube")}) == 2);
        CHECK(run({"spectrogram", p(dir, "nothing.iq"), p(dir, "c.cfg"), p(dir, "s.bin")}) == 2);
        CHECK(run_tool({"spectrogram", "a", "b", "c", "--format", "tiff"}, dir.path()) == 2);
        CHECK(run_tool({"bogus"}, dir.path()) == 2);
        CHECK(run_tool({"--help"}, dir.path()) == 0);
        CHECK(run({"preset", "run_like", p(dir, "x.scenario")}) == 2);
    }
    SUBCASE("unknown config key") {
        write_text_file(dir / "bad.cfg", "hopp = 3\n");
        CHECK(run({"preset", "static_scatterer", p(dir, "s.scenario")}) == 0);
        CHECK(run({"simulate", p(dir, "s.scenario"), p(dir, "cube")}) == 0);
        CHECK(run_tool({"spectrogram", "cube.iq", "bad.cfg", "s.bin"}, dir.path(), dir / "err.txt") == 2);
        CHECK(slurp(dir / "err.txt").find("hopp") != std::string::npos);
    }
}

TEST_CASE("preset corners follow motion bandwidth") {
    TempDir dir;
    write_text_file(dir / "c.cfg", "");
    int f_c[2] = {0, 0};
    const char* names[2] = {"limp_like", "walk_like"};
    for (int i = 0; i < 2; ++i) {
        const std::string n = names[i];
        REQUIRE(run({"preset", n, p(dir, n + ".scenario")}) == 0);
        REQUIRE(run({"simulate", p(dir, n + ".scenario"), p(dir, n)}) == 0);
        REQUIRE(run({"ra", p(dir, n + ".iq"), p(dir, "c.cfg"), p(dir, n + "_ra.bin")}) == 0);
        f_c[i] = static_cast<int>(KeyValueFile::load(dir / (n + "_ra.bin.meta")).require_double("f_c_bin"));
    }
    CHECK(f_c[0] < f_c[1]);
}
