#pragma once

#include <span>
#include <vector>

#include "radoppler/ingest.hpp"
#include "radoppler/keyvalue.hpp"
#include "radoppler/preprocess.hpp"
#include "radoppler/types.hpp"

namespace radoppler {

/// SPEC(t,f): frames × signed frequency bins, negative frequencies first.
///
/// Column k holds frequency (k - F/2)·prf/F, so column F/2 is 0 Hz and
/// column 0 is the Nyquist bin -prf/2.
struct Spectrogram {
    RealMatrix power;
    double chirp_repetition_freq = 0.0;
    double frame_dt = 0.0;       // s between frames
    double time_origin = 0.0;    // s, centre of frame 0

    std::size_t num_frames() const { return static_cast<std::size_t>(power.rows()); }
    std::size_t num_freq_bins() const { return static_cast<std::size_t>(power.cols()); }
    double bin_hz() const { return chirp_repetition_freq / static_cast<double>(num_freq_bins()); }
    double f_max() const { return chirp_repetition_freq / 2.0; }

    std::vector<double> freq_axis() const;
    std::vector<double> time_axis() const;

    // Sidecar with axis parameters, written next to the matrix file.
    void write_axes(KeyValueFile& kv) const;
    static Spectrogram from_parts(RealMatrix power, const KeyValueFile& axes);
};

std::vector<double> make_window(WindowKind kind, std::size_t length);

// s(n) = Σ_{r=r_s}^{r_e} x(r,n), or Σ |x(r,n)| when cfg.coherent is false.
std::vector<Complex> slow_time_signal(const RangeProfileMatrix& profiles, const PipelineConfig& cfg);

// STFT power of an already range-summed slow-time signal.
Spectrogram stft_power(std::span<const Complex> signal, double chirp_repetition_freq, const PipelineConfig& cfg);

Spectrogram stft_spectrogram(const RangeProfileMatrix& profiles, const PipelineConfig& cfg);

// log10(max(power, floor·max(power))). Throws DegenerateInput on all zeros.
RealMatrix log_view(const RealMatrix& power, double floor);

}  // namespace radoppler
