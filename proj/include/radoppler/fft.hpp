#pragma once

#include <span>
#include <vector>

#include "radoppler/types.hpp"

namespace radoppler {

// Unnormalized forward DFT, X[k] = Σ_n x[n]·exp(-j2πkn/N), any length.
std::vector<Complex> forward_dft(std::span<const Complex> input);

}  // namespace radoppler
