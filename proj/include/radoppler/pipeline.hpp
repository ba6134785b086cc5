#pragma once

#include "radoppler/ingest.hpp"
#include "radoppler/preprocess.hpp"
#include "radoppler/spectrogram.hpp"

namespace radoppler {

// range_transform → clutter_filter → stft_spectrogram.
Spectrogram spectrogram_from_cube(const RadarCube& cube, const PipelineConfig& cfg);

}  // namespace radoppler
