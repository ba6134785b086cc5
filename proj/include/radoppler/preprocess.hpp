#pragma once

#include <span>
#include <vector>

#include "radoppler/ingest.hpp"
#include "radoppler/types.hpp"

namespace radoppler {

/// x(r,n): complex range bin × chirp matrix.
struct RangeProfileMatrix {
    ComplexMatrix values;           // num_range_bins × num_chirps
    double range_resolution = 0.0;  // m per bin
    double chirp_repetition_freq = 0.0;

    std::size_t num_range_bins() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t num_chirps() const { return static_cast<std::size_t>(values.cols()); }
};

// Full N-point fast-time DFT of every chirp (N × num_chirps), no window.
ComplexMatrix fast_time_spectrum(const RadarCube& cube);

// Keeps the positive-range half, bins 0..N/2-1.
RangeProfileMatrix range_transform(const RadarCube& cube);

// Direct form II transposed biquad with a0 normalised to 1.
struct BiquadSection {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

/// Digital Butterworth high-pass of even order, designed by bilinear
/// transform with the cutoff prewarped, as order/2 cascaded biquads.
std::vector<BiquadSection> design_butterworth_highpass(double cutoff_hz, double sample_rate_hz, int order);

// |H(e^{jω})| of the cascade at the given frequency.
double magnitude_response(std::span<const BiquadSection> sections, double freq_hz, double sample_rate_hz);

enum class FilterInit {
    zero,
    // State as if the first sample had been held since n = -∞.
    first_sample,
    // State as if the row mean had been held since n = -∞. A chirp-constant
    // offset then produces no output at all, even though the 0.01 Hz
    // default cutoff has a time constant far longer than a typical dwell.
    row_mean,
};

void filter_in_place(std::span<Complex> signal, std::span<const BiquadSection> sections, FilterInit init);

/// Slow-time Butterworth high-pass applied to every range bin, causal.
RangeProfileMatrix clutter_filter(const RangeProfileMatrix& profiles, double cutoff_hz, int order,
                                  FilterInit init = FilterInit::row_mean);

}  // namespace radoppler
