#include "radoppler/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "radoppler/error.hpp"

namespace radoppler {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScattererSpec parse_scatterer(std::string_view text, const std::string& where) {
    const std::string body = trim(text);
    if (body.size() < 2 || body.front() != '{' || body.back() != '}') {
        throw InvalidInput(where + ": scatterer must be written as {key = value, ...}");
    }
    ScattererSpec s;
    bool seen_range = false;
    const std::string inner = body.substr(1, body.size() - 2);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
        auto comma = inner.find(',', pos);
        if (comma == std::string::npos) comma = inner.size();
        const std::string item = trim(std::string_view(inner).substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw InvalidInput(where + ": expected key = value inside scatterer, got '" + item + "'");
        }
        const std::string key = trim(std::string_view(item).substr(0, eq));
        const double value = parse_double(std::string_view(item).substr(eq + 1), where + ": " + key);
        if (key == "base_range") {
            s.base_range = value;
            seen_range = true;
        } else if (key == "base_velocity") {
            s.base_velocity = value;
        } else if (key == "micro_amp") {
            s.micro_amp = value;
        } else if (key == "micro_freq") {
            s.micro_freq = value;
        } else if (key == "micro_phase") {
            s.micro_phase = value;
        } else if (key == "rcs") {
            s.rcs = value;
        } else {
            throw InvalidInput(where + ": unknown scatterer field '" + key + "'");
        }
    }
    if (!seen_range) {
        throw InvalidInput(where + ": scatterer lacks base_range");
    }
    return s;
}

std::string format_scatterer(const ScattererSpec& s) {
    return "{base_range = " + format_double(s.base_range) + ", base_velocity = " + format_double(s.base_velocity) +
           ", micro_amp = " + format_double(s.micro_amp) + ", micro_freq = " + format_double(s.micro_freq) +
           ", micro_phase = " + format_double(s.micro_phase) + ", rcs = " + format_double(s.rcs) + "}";
}

}  // namespace

double ScattererSpec::range_at(double t) const {
    double r = base_range + base_velocity * t;
    if (micro_freq > 0.0) {
        const double w = kTwoPi * micro_freq;
        r += micro_amp / w * (std::cos(micro_phase) - std::cos(w * t + micro_phase));
    } else {
        r += micro_amp * std::sin(micro_phase) * t;
    }
    return r;
}

double ScattererSpec::peak_speed() const { return std::abs(base_velocity) + std::abs(micro_amp); }

double doppler_shift(double velocity, double center_freq) { return 2.0 * velocity * center_freq / kSpeedOfLight; }

void Scenario::validate() const {
    params.validate();
    if (scatterers.empty()) {
        throw InvalidInput("scenario needs at least one scatterer");
    }
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power)) {
        throw InvalidInput("scenario noise_power must be finite and >= 0");
    }
    const double nyquist = params.chirp_repetition_freq / 2.0;
    for (std::size_t i = 0; i < scatterers.size(); ++i) {
        const auto& s = scatterers[i];
        const std::string name = "scatterer " + std::to_string(i);
        if (!(s.base_range > 0.0)) throw InvalidInput(name + ": base_range must be > 0");
        if (!(s.micro_freq >= 0.0)) throw InvalidInput(name + ": micro_freq must be >= 0");
        if (!(s.rcs > 0.0)) throw InvalidInput(name + ": rcs must be > 0");
        for (double v : {s.base_velocity, s.micro_amp, s.micro_phase}) {
            if (!std::isfinite(v)) throw InvalidInput(name + ": non-finite motion parameter");
        }
        const double peak = std::abs(doppler_shift(s.peak_speed(), params.center_freq));
        if (!(peak < nyquist)) {
            throw InvalidInput(name + ": peak Doppler " + format_double(peak) + " Hz aliases (limit " +
                               format_double(nyquist) + " Hz)");
        }
    }
}

KeyValueFile Scenario::to_keyvalue() const {
    KeyValueFile kv;
    params.write_to(kv);
    kv.set("noise_power", noise_power);
    kv.set("seed", seed);
    for (const auto& s : scatterers) {
        kv.add("scatterer", format_scatterer(s));
    }
    return kv;
}

Scenario Scenario::from_keyvalue(const KeyValueFile& kv) {
    Scenario sc;
    sc.params = RadarParams::read_from(kv);
    sc.noise_power = kv.require_double("noise_power");
    sc.seed = kv.require_count("seed");
    const auto blocks = kv.find_all("scatterer");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        sc.scatterers.push_back(parse_scatterer(blocks[i], kv.source() + ": scatterer " + std::to_string(i)));
    }
    sc.validate();
    return sc;
}

Scenario Scenario::load(const std::filesystem::path& path) { return from_keyvalue(KeyValueFile::load(path)); }

void Scenario::save(const std::filesystem::path& path) const { to_keyvalue().save(path); }

RadarCube synthesize(const Scenario& scenario) {
    scenario.validate();
    const auto& p = scenario.params;
    const auto n_fast = static_cast<Eigen::Index>(p.num_fast_samples);
    const auto n_chirps = static_cast<Eigen::Index>(p.num_chirps);
    // Beat frequency over sample rate, per metre of range: 2·B/(c·T·fs).
    const double beat_cycles_per_metre = 2.0 * p.bandwidth / (kSpeedOfLight * p.chirp_duration() * p.sample_rate);
    const double carrier_cycles_per_metre = 2.0 * p.center_freq / kSpeedOfLight;

    std::vector<std::complex<double>> chirp(static_cast<std::size_t>(n_fast));
    RadarCube cube;
    cube.params = p;
    cube.samples.resize(n_fast, n_chirps);

    std::mt19937_64 rng(scenario.seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(scenario.noise_power / 2.0));

    for (Eigen::Index n = 0; n < n_chirps; ++n) {
        const double t = static_cast<double>(n) / p.chirp_repetition_freq;
        std::fill(chirp.begin(), chirp.end(), Complex(0.0));
        for (const auto& s : scenario.scatterers) {
            const double range = s.range_at(t);
            const double carrier = carrier_cycles_per_metre * range;
            const double carrier_frac = carrier - std::floor(carrier);
            const double beat = beat_cycles_per_metre * range;
            for (Eigen::Index i = 0; i < n_fast; ++i) {
                double cycles = beat * static_cast<double>(i) + carrier_frac;
                cycles -= std::floor(cycles);
                chirp[static_cast<std::size_t>(i)] += std::polar(s.rcs, kTwoPi * cycles);
            }
        }
        for (Eigen::Index i = 0; i < n_fast; ++i) {
            Complex z = chirp[static_cast<std::size_t>(i)];
            if (scenario.noise_power > 0.0) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                z += Complex(re, im);
            }
            cube.samples(i, n) = {static_cast<float>(z.real()), static_cast<float>(z.imag())};
        }
    }
    return cube;
}

Preset parse_preset(std::string_view name) {
    const std::string s = trim(name);
    if (s == "fall_like") return Preset::fall_like;
    if (s == "limp_like") return Preset::limp_like;
    if (s == "walk_like") return Preset::walk_like;
    if (s == "static_scatterer") return Preset::static_scatterer;
    throw InvalidInput("unknown preset '" + s + "'");
}

std::string_view to_string(Preset preset) {
    switch (preset) {
        case Preset::fall_like: return "fall_like";
        case Preset::limp_like: return "limp_like";
        case Preset::walk_like: return "walk_like";
        case Preset::static_scatterer: return "static_scatterer";
    }
    return "?";
}

// All presets use the default RadarParams: 77 GHz, 2 kHz PRF (±1 kHz, about
// ±1.95 m/s unambiguous), 2048 chirps (1.024 s), 15 cm range bins.
// Activity presets also carry a static wall at 3.5 m as clutter.
Scenario preset(Preset which) {
    Scenario sc;
    sc.noise_power = 0.01;
    const ScattererSpec wall{3.5, 0.0, 0.0, 0.0, 0.0, 0.5};
    switch (which) {
        case Preset::fall_like: {
            // One half-cycle of toward-radar velocity across the dwell: a single
            // burst reaching 1.7 m/s (≈ 873 Hz).
            const double burst = 0.5 / (static_cast<double>(sc.params.num_chirps) / sc.params.chirp_repetition_freq);
            sc.scatterers = {
                {2.8, 0.0, 0.9, burst, std::numbers::pi, 1.0},
                {2.6, 0.0, 1.7, burst, std::numbers::pi, 0.6},
                wall,
            };
            sc.seed = 11;
            break;
        }
        case Preset::limp_like:
            // Slow asymmetric sway, -0.2..+0.4 m/s on the limb.
            sc.scatterers = {
                {2.0, 0.0, 0.1, 0.7, 0.0, 1.0},
                {2.1, 0.1, 0.3, 0.7, 0.5, 0.6},
                wall,
            };
            sc.seed = 12;
            break;
        case Preset::walk_like:
            // Torso sway plus counter-phased leg and arm swing at the gait rate.
            sc.scatterers = {
                {2.0, 0.0, 0.35, 1.0, 0.0, 1.0},
                {2.1, 0.0, 1.3, 1.0, 0.0, 0.5},
                {1.9, 0.0, 0.8, 1.0, std::numbers::pi, 0.3},
                wall,
            };
            sc.seed = 13;
            break;
        case Preset::static_scatterer:
            sc.scatterers = {{2.0, 0.0, 0.0, 0.0, 0.0, 1.0}};
            sc.seed = 14;
            break;
    }
    sc.validate();
    return sc;
}

Scenario preset(std::string_view name) { return preset(parse_preset(name)); }

}  // namespace radoppler
