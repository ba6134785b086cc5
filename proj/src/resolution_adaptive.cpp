#include "radoppler/resolution_adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "radoppler/error.hpp"

namespace radoppler {
namespace {

constexpr double kMeanSquareFloor = 1e-300;

// Σ e² over signed bins via prefix sums on -f_max..f_max (2·f_max + 1 points).
class SquaredPrefix {
public:
    explicit SquaredPrefix(const EnergyProfile& e) : f_max_(e.f_max_bin()), prefix_(2 * f_max_ + 2, 0.0) {
        for (int i = -f_max_; i <= f_max_; ++i) {
            const double v = e.at(i);
            prefix_[index(i) + 1] = prefix_[index(i)] + v * v;
        }
    }

    double log_ms(int n, int m) const {
        const double len = static_cast<double>(m - n + 1);
        const double mean = (prefix_[index(m) + 1] - prefix_[index(n)]) / len;
        return len * std::log10(std::max(mean, kMeanSquareFloor));
    }

private:
    std::size_t index(int signed_bin) const { return static_cast<std::size_t>(signed_bin + f_max_); }

    int f_max_;
    std::vector<double> prefix_;
};

void check_profile(const EnergyProfile& e) {
    if (e.values.empty() || e.values.size() % 2 != 0) {
        throw InvalidInput("energy profile needs an even, non-zero bin count");
    }
    for (double v : e.values) {
        if (!std::isfinite(v)) {
            throw InvalidInput("energy profile contains a non-finite entry");
        }
    }
}

RASpectrogram assemble(const Spectrogram& spec, FilterBank bank, std::optional<CornerResult> corner) {
    RASpectrogram ra;
    ra.power = apply_filter_bank(spec.power, bank);
    ra.corner = corner;
    ra.bank = std::move(bank);
    ra.bin_hz = spec.bin_hz();
    ra.frame_dt = spec.frame_dt;
    ra.time_origin = spec.time_origin;
    return ra;
}

std::string join(const std::vector<double>& values, double scale) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(values[i] * scale);
    }
    return out;
}

}  // namespace

double EnergyProfile::at(int signed_bin) const {
    const int f_max = f_max_bin();
    if (signed_bin < -f_max || signed_bin > f_max) {
        throw InvalidInput("signed bin " + std::to_string(signed_bin) + " outside ±" + std::to_string(f_max));
    }
    const int wrapped = signed_bin == f_max ? -f_max : signed_bin;
    return values[static_cast<std::size_t>(wrapped + f_max)];
}

EnergyProfile energy_profile(const RealMatrix& power, double floor) {
    const RealMatrix logs = log_view(power, floor);
    EnergyProfile e;
    e.values.assign(static_cast<std::size_t>(logs.cols()), 0.0);
    for (Eigen::Index t = 0; t < logs.rows(); ++t) {
        for (Eigen::Index f = 0; f < logs.cols(); ++f) {
            e.values[static_cast<std::size_t>(f)] += logs(t, f);
        }
    }
    return e;
}

EnergyProfile energy_profile(const Spectrogram& spec, double floor) { return energy_profile(spec.power, floor); }

double log_ms(const EnergyProfile& e, int n, int m) {
    if (n > m) {
        throw InvalidInput("LogMS over empty interval [" + std::to_string(n) + ", " + std::to_string(m) + "]");
    }
    double sum = 0.0;
    for (int i = n; i <= m; ++i) {
        const double v = e.at(i);
        sum += v * v;
    }
    const double len = static_cast<double>(m - n + 1);
    return len * std::log10(std::max(sum / len, kMeanSquareFloor));
}

CornerResult find_corners(const EnergyProfile& e) {
    check_profile(e);
    const int f_max = e.f_max_bin();
    if (f_max < 4) {
        throw InvalidInput("frequency axis of ±" + std::to_string(f_max) +
                           " bins is too short for a three-segment corner search");
    }
    const SquaredPrefix prefix(e);

    // Row-major J over f1 ∈ [-f_max+1, -1] × f2 ∈ [1, f_max-1].
    const int n1 = f_max - 1;
    const int n2 = f_max - 1;
    std::vector<double> cost(static_cast<std::size_t>(n1 * n2));
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n1; ++i) {
        const int f1 = -f_max + 1 + i;
        const double head = prefix.log_ms(-f_max, f1);
        for (int j = 0; j < n2; ++j) {
            const int f2 = 1 + j;
            const double j_val = head + prefix.log_ms(f1, f2) + prefix.log_ms(f2, f_max);
            cost[static_cast<std::size_t>(i * n2 + j)] = j_val;
            best = std::min(best, j_val);
        }
    }

    const double tol = kCornerTieTolerance * std::max(1.0, std::abs(best));
    CornerResult result;
    bool found = false;
    for (int i = 0; i < n1; ++i) {
        const int f1 = -f_max + 1 + i;
        for (int j = 0; j < n2; ++j) {
            const int f2 = 1 + j;
            const double j_val = cost[static_cast<std::size_t>(i * n2 + j)];
            if (j_val > best + tol) {
                continue;
            }
            const int width = f2 - f1;
            const int best_width = result.f_pc - result.f_nc;
            if (!found || width < best_width || (width == best_width && f2 < result.f_pc)) {
                result = {f1, f2, std::max(-f1, f2), j_val};
                found = true;
            }
        }
    }
    if (!found) {
        throw InternalError("corner search produced no finite objective");
    }
    return result;
}

double scale_forward(double f, double f_c) {
    if (!(f_c > 0.0)) {
        throw InvalidInput("corner frequency must be > 0");
    }
    if (f < 0.0) {
        throw InvalidInput("scale_forward needs f >= 0");
    }
    return f_c / std::log10(2.0) * std::log10(1.0 + f / f_c);
}

double scale_inverse(double warped, double f_c) {
    if (!(f_c > 0.0)) {
        throw InvalidInput("corner frequency must be > 0");
    }
    if (warped < 0.0) {
        throw InvalidInput("scale_inverse needs P >= 0");
    }
    const double z = std::log10(2.0) * warped / f_c;
    return f_c * (std::pow(10.0, z) - 1.0);
}

double filter_weight(std::span<const double> p, std::size_t m, double f) {
    if (m == 0 || m + 1 >= p.size()) {
        throw InvalidInput("filter index " + std::to_string(m) + " outside 1.." + std::to_string(p.size() - 2));
    }
    const double lo = p[m - 1];
    const double mid = p[m];
    const double hi = p[m + 1];
    if (f >= lo && f <= mid) {
        return (f - lo) / (mid - lo);
    }
    if (f > mid && f <= hi) {
        return (hi - f) / (hi - mid);
    }
    return 0.0;
}

FilterBank build_filter_bank(double f_c, int f_max, std::size_t num_filters) {
    if (!(f_c > 0.0)) {
        throw InvalidInput("corner frequency must be > 0");
    }
    if (num_filters < 2) {
        throw InvalidInput("filter bank needs M >= 2");
    }
    if (f_max < 1) {
        throw InvalidInput("filter bank needs f_max >= 1 bin");
    }
    const std::size_t count = num_filters + 2;
    const double warped_max = scale_forward(static_cast<double>(f_max), f_c);
    std::vector<double> p(count);
    for (std::size_t m = 0; m < count; ++m) {
        const double warped = static_cast<double>(m) * warped_max / static_cast<double>(num_filters + 1);
        p[m] = scale_inverse(warped, f_c);
    }
    p.front() = 0.0;
    p.back() = static_cast<double>(f_max);

    if (count > static_cast<std::size_t>(f_max) + 1) {
        // More break points than integer bins: name the first pair sharing one.
        for (std::size_t m = 0; m + 1 < count; ++m) {
            if (std::lround(p[m]) == std::lround(p[m + 1])) {
                throw InvalidInput("degenerate filter bank: break points p_" + std::to_string(m) + " and p_" +
                                   std::to_string(m + 1) + " collapse onto bin " +
                                   std::to_string(std::lround(p[m])) + " (M+2 = " + std::to_string(count) +
                                   " exceeds the " + std::to_string(f_max + 1) + " resolvable bins)");
            }
        }
    }
    for (std::size_t m = 0; m + 1 < count; ++m) {
        if (!(p[m + 1] > p[m])) {
            throw InvalidInput("degenerate filter bank: break points p_" + std::to_string(m) + " and p_" +
                               std::to_string(m + 1) + " coincide");
        }
    }

    FilterBank bank;
    bank.corner = f_c;
    bank.f_max = f_max;
    bank.weights = RealMatrix::Zero(static_cast<Eigen::Index>(num_filters), f_max + 1);
    for (std::size_t m = 1; m <= num_filters; ++m) {
        for (int f = 0; f <= f_max; ++f) {
            bank.weights(static_cast<Eigen::Index>(m - 1), f) = filter_weight(p, m, static_cast<double>(f));
        }
    }
    bank.break_points = std::move(p);
    return bank;
}

RealMatrix apply_filter_bank(const RealMatrix& power, const FilterBank& bank) {
    const auto bins = power.cols();
    if (bins != 2 * static_cast<Eigen::Index>(bank.f_max)) {
        throw InvalidInput("filter bank covers 0.." + std::to_string(bank.f_max) + " bins, spectrogram has " +
                           std::to_string(bins) + " signed bins");
    }
    const Eigen::Index m_count = bank.weights.rows();
    const Eigen::Index zero = bins / 2;
    // Column views of SPEC(t, +f) and SPEC(t, -f) for f = 0..f_max; the
    // Nyquist column is shared by both halves.
    RealMatrix positive(power.rows(), bank.f_max + 1);
    RealMatrix negative(power.rows(), bank.f_max + 1);
    for (Eigen::Index f = 0; f <= bank.f_max; ++f) {
        positive.col(f) = power.col((zero + f) % bins);
        negative.col(f) = power.col(zero - f);
    }
    const RealMatrix pos = positive * bank.weights.transpose();
    const RealMatrix neg = negative * bank.weights.transpose();

    RealMatrix out(power.rows(), 2 * m_count);
    for (Eigen::Index m = 0; m < m_count; ++m) {
        out.col(m_count - 1 - m) = neg.col(m);
        out.col(m_count + m) = pos.col(m);
    }
    return out;
}

std::vector<double> RASpectrogram::filter_axis() const {
    const auto m_count = static_cast<int>(num_filters());
    std::vector<double> axis;
    axis.reserve(2 * num_filters());
    for (int m = m_count; m >= 1; --m) axis.push_back(-m);
    for (int m = 1; m <= m_count; ++m) axis.push_back(m);
    return axis;
}

void RASpectrogram::write_sidecar(KeyValueFile& kv) const {
    kv.set("kind", std::string("ra_spectrogram"));
    kv.set("axis_kind", std::string("ra_filter_index"));
    kv.set("num_frames", static_cast<std::uint64_t>(power.rows()));
    kv.set("num_filters", static_cast<std::uint64_t>(num_filters()));
    kv.set("frame_dt", frame_dt);
    kv.set("time_origin", time_origin);
    kv.set("bin_hz", bin_hz);
    kv.set("f_max_bin", static_cast<std::uint64_t>(bank.f_max));
    kv.set("corner_mode", std::string(corner ? "detected" : "forced"));
    if (corner) {
        kv.set("f_nc_bin", std::to_string(corner->f_nc));
        kv.set("f_pc_bin", std::to_string(corner->f_pc));
        kv.set("f_nc_hz", corner->f_nc * bin_hz);
        kv.set("f_pc_hz", corner->f_pc * bin_hz);
        kv.set("objective", corner->objective);
    }
    kv.set("f_c_bin", bank.corner);
    kv.set("f_c_hz", bank.corner * bin_hz);
    kv.set("break_points_bin", join(bank.break_points, 1.0));
    kv.set("break_points_hz", join(bank.break_points, bin_hz));
}

RASpectrogram ra_transform(const Spectrogram& spec, std::size_t num_filters, double floor) {
    const EnergyProfile e = energy_profile(spec, floor);
    const CornerResult corner = find_corners(e);
    if (corner.f_c < 2) {
        throw DegenerateInput("corner frequency of " + std::to_string(corner.f_c) +
                              " bin is below 2 bins; use a forced corner to override");
    }
    return assemble(spec, build_filter_bank(corner.f_c, e.f_max_bin(), num_filters), corner);
}

RASpectrogram ra_transform_forced(const Spectrogram& spec, std::size_t num_filters, double corner_hz) {
    if (!(corner_hz > 0.0) || !std::isfinite(corner_hz)) {
        throw InvalidInput("forced corner frequency must be > 0 Hz");
    }
    if (spec.power.size() == 0 || spec.num_freq_bins() % 2 != 0) {
        throw InvalidInput("spectrogram needs a non-empty, even frequency axis");
    }
    const int f_max = static_cast<int>(spec.num_freq_bins() / 2);
    const double corner_bins = std::min(corner_hz / spec.bin_hz(), static_cast<double>(f_max));
    return assemble(spec, build_filter_bank(corner_bins, f_max, num_filters), std::nullopt);
}

}  // namespace radoppler
