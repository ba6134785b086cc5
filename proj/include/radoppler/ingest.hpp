#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "radoppler/keyvalue.hpp"
#include "radoppler/types.hpp"

namespace radoppler {

/// Acquisition parameters of one FMCW capture.
struct RadarParams {
    std::size_t num_fast_samples = 64;
    std::size_t num_chirps = 2048;
    double sample_rate = 2.0e6;            // Hz, fast time
    double chirp_repetition_freq = 2000.0; // Hz, slow-time sampling rate
    double center_freq = 77.0e9;           // Hz
    double bandwidth = 1.0e9;              // Hz

    /// Throws InvalidInput naming the first violated invariant.
    void validate() const;

    /// Chirp duration assuming the whole sweep is sampled.
    double chirp_duration() const { return static_cast<double>(num_fast_samples) / sample_rate; }
    double range_resolution() const { return kSpeedOfLight / (2.0 * bandwidth); }

    void write_to(KeyValueFile& kv) const;
    static RadarParams read_from(const KeyValueFile& kv);

    bool operator==(const RadarParams&) const = default;
};

/// Raw fast-time × slow-time samples plus metadata.
struct RadarCube {
    RadarParams params;
    SampleMatrix samples;  // num_fast_samples × num_chirps

    void validate() const;
};

enum class WindowKind { hann, hamming, rect };

std::string_view to_string(WindowKind kind);
WindowKind parse_window_kind(std::string_view text);

struct PipelineConfig {
    std::size_t range_bin_start = 0;
    // Unset means "last range bin".
    std::optional<std::size_t> range_bin_end;
    WindowKind window_kind = WindowKind::hann;
    std::size_t window_length = 128;
    std::size_t hop = 16;
    std::size_t fft_length = 256;
    double notch_cutoff = 0.01;  // Hz
    int notch_order = 4;
    std::size_t num_filters = 64;
    double log_floor = 1e-12;
    // false sums |x(r,n)| over range bins instead of the complex values.
    bool coherent = true;

    /// Checks the range-independent invariants.
    void validate() const;
    /// Additionally checks r_s ≤ r_e < num_range_bins.
    void validate(std::size_t num_range_bins) const;
    std::size_t resolved_range_end(std::size_t num_range_bins) const;

    void write_to(KeyValueFile& kv, std::string_view prefix = "") const;
    static PipelineConfig read_from(const KeyValueFile& kv);
    static PipelineConfig load(const std::filesystem::path& path);
};

// Cube files: `<name>.iq` payload (interleaved I/Q float32 little-endian,
// one chirp's fast-time samples contiguous) plus `<name>.meta` sidecar.
// Either the .iq path or the extensionless stem may be passed.
std::filesystem::path cube_payload_path(const std::filesystem::path& path);
std::filesystem::path cube_meta_path(const std::filesystem::path& path);

RadarCube load_radar_cube(const std::filesystem::path& path);
void write_radar_cube(const RadarCube& cube, const std::filesystem::path& path);

enum class MatrixFormat { csv, bin, pgm };

std::string_view to_string(MatrixFormat format);
MatrixFormat parse_matrix_format(std::string_view text);

// bin: "RDMX" magic, u8 dtype (0 real f64, 1 complex c128), 3 reserved bytes,
// u32 rows, u32 cols, row-major little-endian payload.
// csv: one row per line, %.17g; complex matrices interleave re,im columns.
// pgm: binary P5, log10 of |value| floored at 1e-12·max, min-max to 0..255.
void write_matrix(const RealMatrix& matrix, const std::filesystem::path& path, MatrixFormat format);
void write_matrix(const ComplexMatrix& matrix, const std::filesystem::path& path, MatrixFormat format);

// Format is sniffed from content. Complex bin files are rejected here.
RealMatrix load_matrix(const std::filesystem::path& path);
// bin complex payloads, or csv with interleaved re,im columns.
ComplexMatrix load_complex_matrix(const std::filesystem::path& path);

// Bytes of a file, for hashing.
std::string read_file_bytes(const std::filesystem::path& path);

}  // namespace radoppler
