#include "radoppler/tracker.hpp"

#include <cmath>
#include <string>

#include "radoppler/error.hpp"
#include "radoppler/keyvalue.hpp"

namespace radoppler {

std::vector<double> peak_track(const RealMatrix& power, std::span<const double> axis) {
    if (power.size() == 0) {
        throw InvalidInput("peak tracking needs a non-empty matrix");
    }
    if (axis.size() != static_cast<std::size_t>(power.cols())) {
        throw InvalidInput("frequency axis has " + std::to_string(axis.size()) + " entries for " +
                           std::to_string(power.cols()) + " columns");
    }
    std::vector<double> peaks(static_cast<std::size_t>(power.rows()));
    for (Eigen::Index t = 0; t < power.rows(); ++t) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < power.cols(); ++k) {
            const double v = power(t, k);
            const double b = power(t, best);
            if (v > b || (v == b && std::abs(axis[k]) < std::abs(axis[best]))) {
                best = k;
            }
        }
        peaks[static_cast<std::size_t>(t)] = axis[static_cast<std::size_t>(best)];
    }
    return peaks;
}

std::vector<double> kalman_smooth(std::span<const double> raw, double dt, const KalmanParams& params) {
    if (raw.empty()) {
        throw InvalidInput("kalman smoothing needs at least one measurement");
    }
    const double q = params.process_noise;
    const double r = params.measurement_noise;
    if (!(dt > 0.0) || !(q > 0.0) || !(r > 0.0)) {
        throw InvalidInput("kalman smoothing needs dt, q and r > 0");
    }
    const double q11 = q * dt * dt * dt / 3.0;
    const double q12 = q * dt * dt / 2.0;
    const double q22 = q * dt;

    double x0 = raw[0];
    double x1 = 0.0;
    double p00 = 1e6 * r;
    double p01 = 0.0;
    double p11 = 1e6 * r;

    std::vector<double> out(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (k > 0) {
            x0 += dt * x1;
            // P <- F P Fᵀ + Q, F = [[1, dt], [0, 1]]
            const double n00 = p00 + 2.0 * dt * p01 + dt * dt * p11 + q11;
            const double n01 = p01 + dt * p11 + q12;
            const double n11 = p11 + q22;
            p00 = n00;
            p01 = n01;
            p11 = n11;
        }
        const double innovation_var = p00 + r;
        if (!(innovation_var > 0.0) || !std::isfinite(innovation_var)) {
            throw InternalError("kalman innovation covariance lost positive definiteness at frame " +
                                std::to_string(k));
        }
        const double k0 = p00 / innovation_var;
        const double k1 = p01 / innovation_var;
        const double innovation = raw[k] - x0;
        x0 += k0 * innovation;
        x1 += k1 * innovation;
        // P <- (I - K H) P
        const double u00 = (1.0 - k0) * p00;
        const double u01 = (1.0 - k0) * p01;
        const double u11 = p11 - k1 * p01;
        p00 = u00;
        p01 = u01;
        p11 = u11;
        out[k] = x0;
    }
    return out;
}

SignatureTrack track_signature(const RealMatrix& power, std::span<const double> axis,
                               std::span<const double> frame_times, const KalmanParams& params,
                               std::string axis_kind) {
    if (frame_times.size() != static_cast<std::size_t>(power.rows())) {
        throw InvalidInput("frame time count does not match the matrix rows");
    }
    SignatureTrack track;
    track.raw_peaks = peak_track(power, axis);
    const double dt = frame_times.size() > 1 ? frame_times[1] - frame_times[0] : 1.0;
    track.smoothed = kalman_smooth(track.raw_peaks, dt, params);
    track.frame_times.assign(frame_times.begin(), frame_times.end());
    track.axis_kind = std::move(axis_kind);
    return track;
}

std::string track_csv(const SignatureTrack& track) {
    std::string out = "frame_time,raw_peak,smoothed\n";
    for (std::size_t t = 0; t < track.raw_peaks.size(); ++t) {
        out += format_double(track.frame_times[t]);
        out += ',';
        out += format_double(track.raw_peaks[t]);
        out += ',';
        out += format_double(track.smoothed[t]);
        out += '\n';
    }
    return out;
}

}  // namespace radoppler
