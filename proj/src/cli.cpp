#include "radoppler/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "radoppler/error.hpp"
#include "radoppler/ingest.hpp"
#include "radoppler/manifest.hpp"
#include "radoppler/pipeline.hpp"
#include "radoppler/resolution_adaptive.hpp"
#include "radoppler/simulator.hpp"
#include "radoppler/spectrogram.hpp"
#include "radoppler/tracker.hpp"

namespace radoppler {
namespace {

namespace fs = std::filesystem;

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("RADOPPLER_LOG");
    if (env == nullptr) return LogLevel::error;
    const std::string v = env;
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    return LogLevel::error;
}

void log(LogLevel level, const std::string& message) {
    if (static_cast<int>(level) <= static_cast<int>(log_level())) {
        static constexpr const char* kNames[] = {"error", "info", "debug"};
        std::cerr << "radoppler [" << kNames[static_cast<int>(level)] << "] " << message << '\n';
    }
}

fs::path with_suffix(const fs::path& path, std::string_view suffix) {
    fs::path p = path;
    p += suffix;
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out << text;
    if (!out) throw InvalidInput("write failed for " + path.string());
}

struct Invocation {
    std::string command_line;
};

void add_cube_inputs(RunManifest& manifest, const fs::path& cube) {
    manifest.add_input(cube_payload_path(cube));
    manifest.add_input(cube_meta_path(cube));
}

void cmd_preset(const Invocation& inv, const std::string& name, const fs::path& out) {
    const Scenario sc = preset(name);
    sc.save(out);
    RunManifest manifest("preset", inv.command_line);
    manifest.fields().set("preset", name);
    manifest.add_output(out);
    manifest.save(with_suffix(out, ".manifest"));
}

void cmd_simulate(const Invocation& inv, const fs::path& scenario_path, const fs::path& out) {
    const Scenario sc = Scenario::load(scenario_path);
    log(LogLevel::info, "synthesizing " + std::to_string(sc.params.num_fast_samples) + "x" +
                            std::to_string(sc.params.num_chirps) + " cube with " +
                            std::to_string(sc.scatterers.size()) + " scatterers");
    const RadarCube cube = synthesize(sc);
    write_radar_cube(cube, out);

    RunManifest manifest("simulate", inv.command_line);
    manifest.add_input(scenario_path);
    manifest.add_output(cube_payload_path(out));
    manifest.add_output(cube_meta_path(out));
    manifest.save(cube_payload_path(out).replace_extension(".manifest"));
}

Spectrogram spectrogram_for(const fs::path& cube_path, const PipelineConfig& cfg) {
    const RadarCube cube = load_radar_cube(cube_path);
    const Spectrogram spec = spectrogram_from_cube(cube, cfg);
    log(LogLevel::info, "spectrogram " + std::to_string(spec.num_frames()) + " frames x " +
                            std::to_string(spec.num_freq_bins()) + " bins");
    return spec;
}

void cmd_spectrogram(const Invocation& inv, const fs::path& cube_path, const fs::path& config_path,
                     const fs::path& out, MatrixFormat format) {
    const PipelineConfig cfg = PipelineConfig::load(config_path);
    const Spectrogram spec = spectrogram_for(cube_path, cfg);
    write_matrix(spec.power, out, format);
    KeyValueFile axes;
    spec.write_axes(axes);
    axes.set("format", std::string(to_string(format)));
    axes.save(with_suffix(out, ".meta"));

    RunManifest manifest("spectrogram", inv.command_line);
    cfg.write_to(manifest.fields(), "config.");
    add_cube_inputs(manifest, cube_path);
    manifest.add_input(config_path);
    manifest.add_output(out);
    manifest.add_output(with_suffix(out, ".meta"));
    manifest.save(with_suffix(out, ".manifest"));
}

Spectrogram load_spectrogram(const fs::path& path) {
    const auto meta_path = with_suffix(path, ".meta");
    if (!fs::exists(meta_path)) {
        throw InvalidInput("missing spectrogram sidecar " + meta_path.string());
    }
    const KeyValueFile axes = KeyValueFile::load(meta_path);
    if (axes.find("format") == "pgm") {
        throw InvalidInput(path.string() + ": pgm spectrograms are display-only; use bin or csv");
    }
    return Spectrogram::from_parts(load_matrix(path), axes);
}

void cmd_ra(const Invocation& inv, const fs::path& input, const fs::path& config_path, const fs::path& out,
            std::optional<std::size_t> filters, std::optional<double> force_fc, MatrixFormat format) {
    PipelineConfig cfg = PipelineConfig::load(config_path);
    if (filters) {
        cfg.num_filters = *filters;
        cfg.validate();
    }
    const bool from_cube = input.extension() == ".iq";
    const Spectrogram spec = from_cube ? spectrogram_for(input, cfg) : load_spectrogram(input);
    const RASpectrogram ra = force_fc ? ra_transform_forced(spec, cfg.num_filters, *force_fc)
                                      : ra_transform(spec, cfg.num_filters, cfg.log_floor);
    if (ra.corner) {
        log(LogLevel::info, "corners f_nc=" + std::to_string(ra.corner->f_nc) + " f_pc=" +
                                std::to_string(ra.corner->f_pc) + " f_c=" + std::to_string(ra.corner->f_c) + " bins");
    }
    write_matrix(ra.power, out, format);
    KeyValueFile sidecar;
    ra.write_sidecar(sidecar);
    sidecar.set("format", std::string(to_string(format)));
    sidecar.save(with_suffix(out, ".meta"));

    RunManifest manifest("ra", inv.command_line);
    cfg.write_to(manifest.fields(), "config.");
    KeyValueFile report;
    ra.write_sidecar(report);
    for (const auto& [k, v] : report.entries()) {
        manifest.fields().set("ra." + k, v);
    }
    if (force_fc) {
        manifest.fields().set("ra.forced_fc_hz", *force_fc);
    }
    if (from_cube) {
        add_cube_inputs(manifest, input);
    } else {
        manifest.add_input(input);
        manifest.add_input(with_suffix(input, ".meta"));
    }
    manifest.add_input(config_path);
    manifest.add_output(out);
    manifest.add_output(with_suffix(out, ".meta"));
    manifest.save(with_suffix(out, ".manifest"));
}

void cmd_track(const Invocation& inv, const fs::path& matrix_path, const fs::path& out, const KalmanParams& kp) {
    const auto meta_path = with_suffix(matrix_path, ".meta");
    if (!fs::exists(matrix_path)) {
        throw InvalidInput("missing input matrix " + matrix_path.string());
    }
    if (!fs::exists(meta_path)) {
        throw InvalidInput("missing matrix sidecar " + meta_path.string());
    }
    const KeyValueFile meta = KeyValueFile::load(meta_path);
    const RealMatrix power = load_matrix(matrix_path);
    const std::string kind = meta.require("kind");

    std::vector<double> axis;
    if (kind == "spectrogram") {
        Spectrogram spec = Spectrogram::from_parts(power, meta);
        axis = spec.freq_axis();
    } else if (kind == "ra_spectrogram") {
        RASpectrogram shape;
        const auto m = meta.require_count("num_filters");
        if (static_cast<std::uint64_t>(power.cols()) != 2 * m) {
            throw InvalidInput(meta_path.string() + ": matrix has " + std::to_string(power.cols()) +
                               " columns, sidecar declares 2x" + std::to_string(m) + " filters");
        }
        shape.bank.weights.resize(static_cast<Eigen::Index>(m), 1);
        axis = shape.filter_axis();
    } else {
        throw InvalidInput(meta_path.string() + ": cannot track a matrix of kind '" + kind + "'");
    }
    const double dt = meta.require_double("frame_dt");
    const double origin = meta.require_double("time_origin");
    std::vector<double> times(static_cast<std::size_t>(power.rows()));
    for (std::size_t t = 0; t < times.size(); ++t) {
        times[t] = origin + static_cast<double>(t) * dt;
    }
    const SignatureTrack track = track_signature(power, axis, times, kp, meta.require("axis_kind"));
    write_text(out, track_csv(track));

    RunManifest manifest("track", inv.command_line);
    manifest.fields().set("track.axis_kind", track.axis_kind);
    manifest.fields().set("track.q", kp.process_noise);
    manifest.fields().set("track.r", kp.measurement_noise);
    manifest.add_input(matrix_path);
    manifest.add_input(meta_path);
    manifest.add_output(out);
    manifest.save(with_suffix(out, ".manifest"));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Micro-Doppler spectrograms and resolution-adaptive spectrograms for FMCW radar", "radoppler"};
    app.require_subcommand(1);

    Invocation inv;
    inv.command_line = "radoppler";
    for (int i = 1; i < argc; ++i) {
        inv.command_line += ' ';
        inv.command_line += argv[i];
    }

    const std::vector<std::string> formats{"csv", "bin", "pgm"};

    std::string preset_name;
    fs::path preset_out;
    auto* preset_cmd = app.add_subcommand("preset", "Write a built-in scenario file");
    preset_cmd->add_option("name", preset_name, "fall_like | limp_like | walk_like | static_scatterer")->required();
    preset_cmd->add_option("out_scenario", preset_out)->required();

    fs::path scenario_path;
    fs::path cube_out;
    auto* simulate = app.add_subcommand("simulate", "Synthesize a radar cube from a scenario file");
    simulate->add_option("scenario", scenario_path)->required();
    simulate->add_option("out_cube", cube_out, "Output cube (<name>.iq + <name>.meta)")->required();

    fs::path spec_cube;
    fs::path spec_config;
    fs::path spec_out;
    std::string spec_format = "bin";
    auto* spectrogram = app.add_subcommand("spectrogram", "Range FFT, clutter filter and STFT spectrogram");
    spectrogram->add_option("cube", spec_cube)->required();
    spectrogram->add_option("config", spec_config)->required();
    spectrogram->add_option("out", spec_out)->required();
    spectrogram->add_option("--format", spec_format)->check(CLI::IsMember(formats));

    fs::path ra_input;
    fs::path ra_config;
    fs::path ra_out;
    std::optional<std::size_t> ra_filters;
    std::optional<double> ra_force_fc;
    std::string ra_format = "bin";
    auto* ra = app.add_subcommand("ra", "Resolution-adaptive spectrogram from a spectrogram or cube");
    ra->add_option("input", ra_input, "Spectrogram matrix with .meta sidecar, or a .iq cube")->required();
    ra->add_option("config", ra_config)->required();
    ra->add_option("out", ra_out)->required();
    ra->add_option("--M", ra_filters, "Number of triangular filters (overrides config)");
    ra->add_option("--force-fc", ra_force_fc, "Skip corner detection and use this corner frequency (Hz)");
    ra->add_option("--format", ra_format)->check(CLI::IsMember(formats));

    fs::path track_input;
    fs::path track_out;
    KalmanParams kp;
    auto* track = app.add_subcommand("track", "Peak track plus Kalman smoothing of a spectrogram");
    track->add_option("matrix", track_input)->required();
    track->add_option("out_csv", track_out)->required();
    track->add_option("--q", kp.process_noise, "Process noise, axis-units^2/s^3");
    track->add_option("--r", kp.measurement_noise, "Measurement noise, axis-units^2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*preset_cmd) {
            cmd_preset(inv, preset_name, preset_out);
        } else if (*simulate) {
            cmd_simulate(inv, scenario_path, cube_out);
        } else if (*spectrogram) {
            cmd_spectrogram(inv, spec_cube, spec_config, spec_out, parse_matrix_format(spec_format));
        } else if (*ra) {
            cmd_ra(inv, ra_input, ra_config, ra_out, ra_filters, ra_force_fc, parse_matrix_format(ra_format));
        } else if (*track) {
            cmd_track(inv, track_input, track_out, kp);
        }
    } catch (const InvalidInput& e) {
        log(LogLevel::error, e.what());
        return 2;
    } catch (const std::exception& e) {
        log(LogLevel::error, std::string("internal error: ") + e.what());
        return 1;
    }
    return 0;
}

}  // namespace radoppler
