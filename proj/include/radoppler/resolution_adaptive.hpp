#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "radoppler/keyvalue.hpp"
#include "radoppler/spectrogram.hpp"
#include "radoppler/types.hpp"

namespace radoppler {

/// e(f) = Σ_t log10 SPEC(t,f) over the spectrogram's signed bins.
///
/// values[k] is signed bin k - F/2. The axis runs -f_max..f_max-1; the
/// Nyquist bin is shared, so at(+f_max) reads the -f_max entry.
struct EnergyProfile {
    std::vector<double> values;

    int f_max_bin() const { return static_cast<int>(values.size() / 2); }
    double at(int signed_bin) const;
};

EnergyProfile energy_profile(const Spectrogram& spec, double floor);
EnergyProfile energy_profile(const RealMatrix& power, double floor);

/// (m-n+1)·log10(mean of e² over [n, m]); the mean is floored at 1e-300.
double log_ms(const EnergyProfile& e, int n, int m);

struct CornerResult {
    int f_nc = 0;  // negative corner, signed bin < 0
    int f_pc = 0;  // positive corner, signed bin > 0
    int f_c = 0;   // max(|f_nc|, f_pc)
    double objective = 0.0;

    bool operator==(const CornerResult&) const = default;
};

// Relative tolerance under which two objective values count as a tie.
inline constexpr double kCornerTieTolerance = 1e-9;

/// Exhaustive three-segment split of the energy profile minimising
///   J(f1,f2) = LogMS(-f_max,f1) + LogMS(f1,f2) + LogMS(f2,f_max)
/// over f1 in [-f_max+1, -1], f2 in [1, f_max-1]. Segments share their
/// endpoints. Among minimisers within kCornerTieTolerance, the narrowest
/// band (smallest f_pc + |f_nc|) wins, then the smaller f_pc.
CornerResult find_corners(const EnergyProfile& e);

/// Warped frequency S(f) = f_c/log10(2) · log10(1 + f/f_c).
double scale_forward(double f, double f_c);
/// Inverse of scale_forward: f_c·(10^z - 1), z = log10(2)·P/f_c.
double scale_inverse(double warped, double f_c);

/// Triangular filters on the non-negative bins 0..f_max.
struct FilterBank {
    std::vector<double> break_points;  // p_0..p_{M+1}, in bins
    RealMatrix weights;                // M × (f_max + 1)
    double corner = 0.0;               // f_c, bins
    int f_max = 0;                     // bins

    std::size_t num_filters() const { return static_cast<std::size_t>(weights.rows()); }
};

// Piecewise-linear triangle of filter m (1..M) at real-valued frequency f.
double filter_weight(std::span<const double> break_points, std::size_t m, double f);

FilterBank build_filter_bank(double f_c, int f_max, std::size_t num_filters);

// frames × 2M: negative side m = M..1, then positive side m = 1..M.
RealMatrix apply_filter_bank(const RealMatrix& power, const FilterBank& bank);

struct RASpectrogram {
    RealMatrix power;
    // Empty when the corner was forced rather than detected.
    std::optional<CornerResult> corner;
    FilterBank bank;
    double bin_hz = 0.0;
    double frame_dt = 0.0;
    double time_origin = 0.0;

    std::size_t num_filters() const { return bank.num_filters(); }
    // Signed filter index per column: -M..-1, 1..M.
    std::vector<double> filter_axis() const;
    void write_sidecar(KeyValueFile& kv) const;
};

RASpectrogram ra_transform(const Spectrogram& spec, std::size_t num_filters, double floor);

// Skips detection and warps around the given corner (Hz), clamped to f_max.
RASpectrogram ra_transform_forced(const Spectrogram& spec, std::size_t num_filters, double corner_hz);

}  // namespace radoppler
