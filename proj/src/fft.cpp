#include "radoppler/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace radoppler {

std::vector<Complex> forward_dft(std::span<const Complex> input) {
    thread_local Eigen::FFT<double> engine;
    std::vector<Complex> in(input.begin(), input.end());
    std::vector<Complex> out;
    engine.fwd(out, in);
    return out;
}

}  // namespace radoppler
