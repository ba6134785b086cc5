#pragma once

#include <span>
#include <string>
#include <vector>

#include "radoppler/types.hpp"

namespace radoppler {

struct SignatureTrack {
    std::vector<double> raw_peaks;
    std::vector<double> smoothed;
    std::vector<double> frame_times;
    std::string axis_kind;
};

// Axis value of each frame's strongest bin; ties go to the bin with the
// smallest |axis|, then to the lower column.
std::vector<double> peak_track(const RealMatrix& power, std::span<const double> axis);

struct KalmanParams {
    double process_noise = 10.0;     // q, axis-units²/s³
    double measurement_noise = 4.0;  // r, axis-units²
};

/// Forward constant-velocity Kalman filter over a peak sequence.
///
/// State [value, rate], white-acceleration process noise
/// Q = q·[[dt³/3, dt²/2], [dt²/2, dt]], prior [raw[0], 0] with covariance
/// 1e6·r·I.
std::vector<double> kalman_smooth(std::span<const double> raw, double dt, const KalmanParams& params = {});

SignatureTrack track_signature(const RealMatrix& power, std::span<const double> axis,
                               std::span<const double> frame_times, const KalmanParams& params,
                               std::string axis_kind);

std::string track_csv(const SignatureTrack& track);

}  // namespace radoppler
