#pragma once

#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "radoppler/types.hpp"

namespace radoppler::test {

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("radoppler-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// O(N²) textbook DFT.
inline std::vector<Complex> naive_dft(const std::vector<Complex>& x) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * i) % n) / static_cast<double>(n);
            acc += x[i] * std::polar(1.0, angle);
        }
        out[k] = acc;
    }
    return out;
}

inline std::vector<Complex> tone(std::size_t n, double cycles_per_sample, double amplitude = 1.0) {
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::polar(amplitude, 2.0 * std::numbers::pi * cycles_per_sample * static_cast<double>(i));
    }
    return x;
}

}  // namespace radoppler::test
