#include "radoppler/pipeline.hpp"

namespace radoppler {

Spectrogram spectrogram_from_cube(const RadarCube& cube, const PipelineConfig& cfg) {
    const auto profiles = range_transform(cube);
    cfg.validate(profiles.num_range_bins());
    const auto filtered = clutter_filter(profiles, cfg.notch_cutoff, cfg.notch_order);
    return stft_spectrogram(filtered, cfg);
}

}  // namespace radoppler
