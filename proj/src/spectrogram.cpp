#include "radoppler/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "radoppler/error.hpp"
#include "radoppler/fft.hpp"

namespace radoppler {

std::vector<double> Spectrogram::freq_axis() const {
    const auto bins = num_freq_bins();
    std::vector<double> axis(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        axis[k] = (static_cast<double>(k) - static_cast<double>(bins / 2)) * bin_hz();
    }
    return axis;
}

std::vector<double> Spectrogram::time_axis() const {
    std::vector<double> axis(num_frames());
    for (std::size_t t = 0; t < axis.size(); ++t) {
        axis[t] = time_origin + static_cast<double>(t) * frame_dt;
    }
    return axis;
}

void Spectrogram::write_axes(KeyValueFile& kv) const {
    kv.set("kind", std::string("spectrogram"));
    kv.set("axis_kind", std::string("doppler_hz"));
    kv.set("num_frames", static_cast<std::uint64_t>(num_frames()));
    kv.set("num_freq_bins", static_cast<std::uint64_t>(num_freq_bins()));
    kv.set("chirp_repetition_freq", chirp_repetition_freq);
    kv.set("bin_hz", bin_hz());
    kv.set("f_max_hz", f_max());
    kv.set("frame_dt", frame_dt);
    kv.set("time_origin", time_origin);
}

Spectrogram Spectrogram::from_parts(RealMatrix power, const KeyValueFile& axes) {
    if (axes.require("kind") != "spectrogram") {
        throw InvalidInput(axes.source() + ": not a spectrogram sidecar");
    }
    Spectrogram spec;
    spec.chirp_repetition_freq = axes.require_double("chirp_repetition_freq");
    spec.frame_dt = axes.require_double("frame_dt");
    spec.time_origin = axes.require_double("time_origin");
    if (static_cast<std::uint64_t>(power.rows()) != axes.require_count("num_frames") ||
        static_cast<std::uint64_t>(power.cols()) != axes.require_count("num_freq_bins")) {
        throw InvalidInput(axes.source() + ": matrix shape does not match sidecar");
    }
    if (power.cols() % 2 != 0 || !(spec.chirp_repetition_freq > 0.0)) {
        throw InvalidInput(axes.source() + ": invalid frequency axis");
    }
    if ((power.array() < 0.0).any() || !power.allFinite()) {
        throw InvalidInput(axes.source() + ": spectrogram power must be finite and non-negative");
    }
    spec.power = std::move(power);
    return spec;
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
    std::vector<double> w(length, 1.0);
    if (length < 2 || kind == WindowKind::rect) {
        return w;
    }
    const double denom = static_cast<double>(length - 1);
    const auto [a0, a1] = kind == WindowKind::hann ? std::pair{0.5, 0.5} : std::pair{0.54, 0.46};
    for (std::size_t n = 0; n < length; ++n) {
        w[n] = a0 - a1 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
    }
    return w;
}

std::vector<Complex> slow_time_signal(const RangeProfileMatrix& profiles, const PipelineConfig& cfg) {
    cfg.validate(profiles.num_range_bins());
    const auto r_end = cfg.resolved_range_end(profiles.num_range_bins());
    std::vector<Complex> s(profiles.num_chirps(), 0.0);
    for (auto r = cfg.range_bin_start; r <= r_end; ++r) {
        const auto row = profiles.values.row(static_cast<Eigen::Index>(r));
        for (std::size_t n = 0; n < s.size(); ++n) {
            const Complex x = row(static_cast<Eigen::Index>(n));
            s[n] += cfg.coherent ? x : Complex(std::abs(x), 0.0);
        }
    }
    return s;
}

Spectrogram stft_power(std::span<const Complex> signal, double chirp_repetition_freq, const PipelineConfig& cfg) {
    cfg.validate();
    const std::size_t len = cfg.window_length;
    if (signal.size() < len) {
        throw InvalidInput("window of " + std::to_string(len) + " samples is longer than the " +
                           std::to_string(signal.size()) + "-chirp signal");
    }
    const std::size_t frames = (signal.size() - len) / cfg.hop + 1;
    const std::size_t bins = cfg.fft_length;
    const auto window = make_window(cfg.window_kind, len);

    Spectrogram spec;
    spec.chirp_repetition_freq = chirp_repetition_freq;
    spec.frame_dt = static_cast<double>(cfg.hop) / chirp_repetition_freq;
    spec.time_origin = 0.5 * static_cast<double>(len - 1) / chirp_repetition_freq;
    spec.power.resize(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(bins));

    std::vector<Complex> frame(bins);
    for (std::size_t t = 0; t < frames; ++t) {
        std::fill(frame.begin(), frame.end(), Complex(0.0));
        for (std::size_t n = 0; n < len; ++n) {
            frame[n] = signal[t * cfg.hop + n] * window[n];
        }
        const auto spectrum = forward_dft(frame);
        for (std::size_t k = 0; k < bins; ++k) {
            // fftshift: column k <- DFT bin (k - F/2) mod F
            spec.power(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) =
                std::norm(spectrum[(k + bins / 2) % bins]);
        }
    }
    return spec;
}

Spectrogram stft_spectrogram(const RangeProfileMatrix& profiles, const PipelineConfig& cfg) {
    const auto s = slow_time_signal(profiles, cfg);
    return stft_power(s, profiles.chirp_repetition_freq, cfg);
}

RealMatrix log_view(const RealMatrix& power, double floor) {
    if (!(floor > 0.0)) {
        throw InvalidInput("log floor must be > 0");
    }
    if (power.size() == 0) {
        throw DegenerateInput("empty spectrogram");
    }
    const double peak = power.maxCoeff();
    if (!(peak > 0.0)) {
        throw DegenerateInput("all-zero spectrogram has no maximum to floor against");
    }
    const double clamp = floor * peak;
    return power.unaryExpr([clamp](double v) { return std::log10(std::max(v, clamp)); });
}

}  // namespace radoppler
