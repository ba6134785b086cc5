#include "radoppler/preprocess.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "radoppler/error.hpp"
#include "radoppler/fft.hpp"

namespace radoppler {

ComplexMatrix fast_time_spectrum(const RadarCube& cube) {
    cube.validate();
    const auto n_fast = cube.samples.rows();
    const auto n_chirps = cube.samples.cols();
    ComplexMatrix out(n_fast, n_chirps);
    std::vector<Complex> chirp(static_cast<std::size_t>(n_fast));
    for (Eigen::Index n = 0; n < n_chirps; ++n) {
        for (Eigen::Index i = 0; i < n_fast; ++i) {
            const auto z = cube.samples(i, n);
            chirp[static_cast<std::size_t>(i)] = {z.real(), z.imag()};
        }
        const auto spectrum = forward_dft(chirp);
        for (Eigen::Index k = 0; k < n_fast; ++k) {
            out(k, n) = spectrum[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

RangeProfileMatrix range_transform(const RadarCube& cube) {
    const ComplexMatrix full = fast_time_spectrum(cube);
    const auto half = full.rows() / 2;
    if (half == 0) {
        throw InvalidInput("range transform needs at least 2 fast-time samples");
    }
    RangeProfileMatrix out;
    out.values = full.topRows(half);
    out.range_resolution = cube.params.range_resolution();
    out.chirp_repetition_freq = cube.params.chirp_repetition_freq;
    return out;
}

std::vector<BiquadSection> design_butterworth_highpass(double cutoff_hz, double sample_rate_hz, int order) {
    if (order < 2 || order % 2 != 0) {
        throw InvalidInput("butterworth order must be even and >= 2, got " + std::to_string(order));
    }
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
        throw InvalidInput("butterworth cutoff " + std::to_string(cutoff_hz) + " Hz outside (0, " +
                           std::to_string(sample_rate_hz / 2.0) + ")");
    }
    // Prewarped analog cutoff in units of the bilinear constant 2·fs.
    const double w = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
    std::vector<BiquadSection> sections;
    for (int k = 0; k < order / 2; ++k) {
        // Low-pass prototype section s² + a·s + 1, mapped s → ω/s, then bilinear.
        const double a = 2.0 * std::sin(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order));
        const double a0 = 1.0 + a * w + w * w;
        BiquadSection s;
        s.b0 = 1.0 / a0;
        s.b1 = -2.0 * s.b0;
        s.b2 = s.b0;
        s.a1 = 2.0 * (w * w - 1.0) / a0;
        s.a2 = (1.0 - a * w + w * w) / a0;
        sections.push_back(s);
    }
    return sections;
}

double magnitude_response(std::span<const BiquadSection> sections, double freq_hz, double sample_rate_hz) {
    const Complex z1 = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / sample_rate_hz);
    const Complex z2 = z1 * z1;
    Complex h = 1.0;
    for (const auto& s : sections) {
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return std::abs(h);
}

void filter_in_place(std::span<Complex> signal, std::span<const BiquadSection> sections, FilterInit init) {
    if (signal.empty()) {
        return;
    }
    std::vector<Complex> s1(sections.size(), 0.0);
    std::vector<Complex> s2(sections.size(), 0.0);
    if (init != FilterInit::zero) {
        Complex x = signal.front();
        if (init == FilterInit::row_mean) {
            x = 0.0;
            for (const auto& v : signal) x += v;
            x /= static_cast<double>(signal.size());
        }
        for (std::size_t k = 0; k < sections.size(); ++k) {
            const auto& s = sections[k];
            const double dc_gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
            const Complex y = dc_gain * x;
            s2[k] = s.b2 * x - s.a2 * y;
            s1[k] = s.b1 * x - s.a1 * y + s2[k];
            x = y;
        }
    }
    for (auto& sample : signal) {
        Complex x = sample;
        for (std::size_t k = 0; k < sections.size(); ++k) {
            const auto& s = sections[k];
            const Complex y = s.b0 * x + s1[k];
            s1[k] = s.b1 * x - s.a1 * y + s2[k];
            s2[k] = s.b2 * x - s.a2 * y;
            x = y;
        }
        sample = x;
    }
}

RangeProfileMatrix clutter_filter(const RangeProfileMatrix& profiles, double cutoff_hz, int order, FilterInit init) {
    const auto sections = design_butterworth_highpass(cutoff_hz, profiles.chirp_repetition_freq, order);
    RangeProfileMatrix out = profiles;
    for (Eigen::Index r = 0; r < out.values.rows(); ++r) {
        std::span<Complex> row(out.values.row(r).data(), static_cast<std::size_t>(out.values.cols()));
        filter_in_place(row, sections, init);
    }
    return out;
}

}  // namespace radoppler
