#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "radoppler/error.hpp"
#include "radoppler/preprocess.hpp"
#include "support.hpp"

using namespace radoppler;
using radoppler::test::naive_dft;
using radoppler::test::tone;

namespace {

RadarCube cube_from_chirps(const std::vector<std::vector<Complex>>& chirps) {
    RadarCube cube;
    cube.params.num_fast_samples = chirps.front().size();
    cube.params.num_chirps = chirps.size();
    cube.params.sample_rate = 1e6;
    cube.params.chirp_repetition_freq = 1000.0;
    cube.samples.resize(static_cast<Eigen::Index>(chirps.front().size()), static_cast<Eigen::Index>(chirps.size()));
    for (std::size_t n = 0; n < chirps.size(); ++n) {
        for (std::size_t i = 0; i < chirps[n].size(); ++i) {
            cube.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = {
                static_cast<float>(chirps[n][i].real()), static_cast<float>(chirps[n][i].imag())};
        }
    }
    return cube;
}

RangeProfileMatrix profiles_from_rows(const std::vector<std::vector<Complex>>& rows, double prf) {
    RangeProfileMatrix p;
    p.chirp_repetition_freq = prf;
    p.range_resolution = 0.15;
    p.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t n = 0; n < rows[r].size(); ++n) {
            p.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n)) = rows[r][n];
        }
    }
    return p;
}

std::vector<Complex> random_row(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> x(n);
    for (auto& v : x) v = {g(rng), g(rng)};
    return x;
}

// Closed-form magnitude of a bilinear-transformed Butterworth high-pass.
double butterworth_highpass_magnitude(double f, double fc, double fs, int order) {
    const double ratio = std::tan(std::numbers::pi * fc / fs) / std::tan(std::numbers::pi * f / fs);
    return 1.0 / std::sqrt(1.0 + std::pow(ratio, 2 * order));
}

}  // namespace

TEST_CASE("range transform of a constant chirp") {
    const auto cube = cube_from_chirps({std::vector<Complex>(8, 1.0), std::vector<Complex>(8, 1.0)});
    const auto p = range_transform(cube);
    REQUIRE(p.num_range_bins() == 4);
    REQUIRE(p.num_chirps() == 2);
    CHECK(std::abs(p.values(0, 0)) == doctest::Approx(8.0).epsilon(1e-12));
    for (int k = 1; k < 4; ++k) {
        CHECK(std::abs(p.values(k, 1)) < 1e-12);
    }
    CHECK(p.range_resolution == doctest::Approx(kSpeedOfLight / 2e9));
}

TEST_CASE("range transform puts a basis tone in its bin") {
    const auto chirp = tone(16, 3.0 / 16.0);
    const auto p = range_transform(cube_from_chirps({chirp, chirp, chirp}));
    for (Eigen::Index n = 0; n < 3; ++n) {
        Eigen::Index best = 0;
        p.values.col(n).cwiseAbs().maxCoeff(&best);
        CHECK(best == 3);
    }
}

TEST_CASE("fast-time spectrum matches a naive DFT and Parseval") {
    std::mt19937_64 rng(5);
    for (std::size_t n : {7u, 16u, 30u}) {
        std::vector<std::vector<Complex>> chirps;
        for (int c = 0; c < 4; ++c) {
            auto x = random_row(rng, n);
            // Store through float so the oracle sees the same samples.
            for (auto& v : x) {
                const float re = static_cast<float>(v.real());
                const float im = static_cast<float>(v.imag());
                v = Complex(re, im);
            }
            chirps.push_back(x);
        }
        const auto full = fast_time_spectrum(cube_from_chirps(chirps));
        INFO("n = " << n);
        for (std::size_t c = 0; c < chirps.size(); ++c) {
            const auto oracle = naive_dft(chirps[c]);
            double time_energy = 0.0;
            double freq_energy = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(std::abs(full(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) - oracle[k]) < 1e-9);
                time_energy += std::norm(chirps[c][k]);
                freq_energy += std::norm(full(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)));
            }
            CHECK(freq_energy == doctest::Approx(static_cast<double>(n) * time_energy).epsilon(1e-9));
        }
    }
}

TEST_CASE("butterworth design matches the closed-form magnitude") {
    for (auto [fc, fs, order] : {std::tuple{0.01, 1000.0, 4}, std::tuple{5.0, 100.0, 2}, std::tuple{30.0, 250.0, 6}}) {
        const auto sections = design_butterworth_highpass(fc, fs, order);
        REQUIRE(sections.size() == static_cast<std::size_t>(order / 2));
        CHECK(magnitude_response(sections, 0.0, fs) < 1e-6);
        CHECK(magnitude_response(sections, fs / 2.0, fs) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(magnitude_response(sections, fc, fs) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
        for (double frac : {0.01, 0.1, 0.25, 0.4}) {
            const double f = frac * fs;
            CHECK(magnitude_response(sections, f, fs) ==
                  doctest::Approx(butterworth_highpass_magnitude(f, fc, fs, order)).epsilon(1e-9));
        }
    }
}

TEST_CASE("clutter filter removes a constant row") {
    const std::vector<Complex> dc(400, Complex(3.0, -2.0));
    SUBCASE("default row-mean initialisation, 0.01 Hz") {
        const auto out = clutter_filter(profiles_from_rows({dc}, 1000.0), 0.01, 4);
        for (Eigen::Index n = 40; n < 400; ++n) {
            CHECK(std::abs(out.values(0, n)) < 1e-6 * std::abs(dc[0]));
        }
    }
    SUBCASE("zero initialisation settles within 10·order samples at a high cutoff") {
        const auto out = clutter_filter(profiles_from_rows({dc}, 1000.0), 250.0, 4, FilterInit::zero);
        for (Eigen::Index n = 40; n < 400; ++n) {
            CHECK(std::abs(out.values(0, n)) < 1e-6 * std::abs(dc[0]));
        }
    }
}

TEST_CASE("quarter-rate tone passes a 0.01 Hz high-pass") {
    const double prf = 1000.0;
    const auto sections = design_butterworth_highpass(0.01, prf, 4);
    CHECK(magnitude_response(sections, prf / 4.0, prf) == doctest::Approx(1.0).epsilon(0.01));
    const auto x = tone(4096, 0.25);
    const auto out = clutter_filter(profiles_from_rows({x}, prf), 0.01, 4);
    for (Eigen::Index n = 2048; n < 4096; ++n) {
        CHECK(std::abs(out.values(0, n)) == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("impulse response decays") {
    const double fs = 100.0;
    const double fc = 1.0;
    const int order = 4;
    const auto sections = design_butterworth_highpass(fc, fs, order);
    const std::size_t len = static_cast<std::size_t>(10 * order * fs / fc);
    std::vector<Complex> h(len, 0.0);
    h[0] = 1.0;
    filter_in_place(h, sections, FilterInit::zero);
    double head = 0.0;
    for (std::size_t n = 0; n < len - 100; ++n) head += std::abs(h[n]);
    double tail = 0.0;
    for (std::size_t n = len - 100; n < len; ++n) tail += std::abs(h[n]);
    CHECK(std::isfinite(head));
    CHECK(tail < 1e-9);
    CHECK(std::abs(h[len - 1]) < 1e-9);
}

TEST_CASE("clutter filter is linear and ignores chirp-constant offsets") {
    std::mt19937_64 rng(11);
    const auto x = random_row(rng, 300);
    const auto y = random_row(rng, 300);
    const Complex a(0.7, -1.3);
    const Complex b(-2.0, 0.4);
    std::vector<Complex> mix(300);
    std::vector<Complex> shifted(300);
    for (std::size_t n = 0; n < 300; ++n) {
        mix[n] = a * x[n] + b * y[n];
        shifted[n] = x[n] + Complex(50.0, -20.0);
    }
    const double prf = 500.0;
    for (FilterInit init : {FilterInit::zero, FilterInit::first_sample, FilterInit::row_mean}) {
        const auto fx = clutter_filter(profiles_from_rows({x}, prf), 0.01, 4, init);
        const auto fy = clutter_filter(profiles_from_rows({y}, prf), 0.01, 4, init);
        const auto fmix = clutter_filter(profiles_from_rows({mix}, prf), 0.01, 4, init);
        for (Eigen::Index n = 0; n < 300; ++n) {
            const Complex expected = a * fx.values(0, n) + b * fy.values(0, n);
            CHECK(std::abs(fmix.values(0, n) - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
        }
    }
    const auto fx = clutter_filter(profiles_from_rows({x}, prf), 0.01, 4);
    const auto fs = clutter_filter(profiles_from_rows({shifted}, prf), 0.01, 4);
    for (Eigen::Index n = 0; n < 300; ++n) {
        CHECK(std::abs(fs.values(0, n) - fx.values(0, n)) < 1e-6);
    }
}

TEST_CASE("rows are filtered independently") {
    std::mt19937_64 rng(2);
    const auto x = random_row(rng, 64);
    const auto y = random_row(rng, 64);
    const auto both = clutter_filter(profiles_from_rows({x, y}, 100.0), 1.0, 2);
    const auto only_y = clutter_filter(profiles_from_rows({y}, 100.0), 1.0, 2);
    CHECK(both.values.row(1) == only_y.values.row(0));
}

TEST_CASE("clutter filter argument errors") {
    const auto p = profiles_from_rows({std::vector<Complex>(10, 1.0)}, 100.0);
    CHECK_THROWS_AS(clutter_filter(p, 0.0, 4), InvalidInput);
    CHECK_THROWS_AS(clutter_filter(p, 50.0, 4), InvalidInput);
    CHECK_THROWS_AS(clutter_filter(p, 1.0, 3), InvalidInput);
    CHECK_THROWS_AS(clutter_filter(p, 1.0, 0), InvalidInput);
}
