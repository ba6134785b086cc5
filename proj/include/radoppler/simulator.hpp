#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "radoppler/ingest.hpp"
#include "radoppler/keyvalue.hpp"

namespace radoppler {

/// Point scatterer with sinusoidal radial micro-motion.
///
/// Radial velocity v(t) = base_velocity + micro_amp·sin(2π·micro_freq·t + micro_phase);
/// positive velocity means increasing range.
struct ScattererSpec {
    double base_range = 1.0;     // m
    double base_velocity = 0.0;  // m/s
    double micro_amp = 0.0;      // m/s
    double micro_freq = 0.0;     // Hz
    double micro_phase = 0.0;    // rad
    double rcs = 1.0;            // linear amplitude

    double range_at(double t) const;
    double peak_speed() const;

    bool operator==(const ScattererSpec&) const = default;
};

struct Scenario {
    RadarParams params;
    std::vector<ScattererSpec> scatterers;
    double noise_power = 0.0;
    std::uint64_t seed = 0;

    /// Throws InvalidInput; aliasing errors name the scatterer index.
    void validate() const;

    KeyValueFile to_keyvalue() const;
    static Scenario from_keyvalue(const KeyValueFile& kv);
    static Scenario load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    bool operator==(const Scenario&) const = default;
};

// Two-way Doppler shift 2·v·f0/c of a radial velocity.
double doppler_shift(double velocity, double center_freq);

RadarCube synthesize(const Scenario& scenario);

enum class Preset { fall_like, limp_like, walk_like, static_scatterer };

Preset parse_preset(std::string_view name);
std::string_view to_string(Preset preset);
Scenario preset(Preset which);
Scenario preset(std::string_view name);

}  // namespace radoppler
