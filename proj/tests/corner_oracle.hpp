#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace radoppler::test {

struct OracleCorners {
    int f_nc;
    int f_pc;
    double objective;
};

// Signed-bin access on an F-bin axis (-F/2..F/2-1) with the Nyquist bin
// shared between -F/2 and +F/2.
inline double signed_value(const std::vector<double>& values, int bin) {
    const int half = static_cast<int>(values.size() / 2);
    if (bin == half) bin = -half;
    return values[static_cast<std::size_t>(bin + half)];
}

// Direct evaluation of the logarithmic mean square, no prefix sums.
inline double direct_log_ms(const std::vector<double>& values, int n, int m) {
    double sum = 0.0;
    for (int i = n; i <= m; ++i) {
        const double v = signed_value(values, i);
        sum += v * v;
    }
    const double len = m - n + 1;
    return len * std::log10(std::max(sum / len, 1e-300));
}

// Brute-force O(F³) three-segment search with the same tie rule as the
// library: within 1e-9 relative of the minimum, narrowest band, then the
// smaller positive corner.
inline OracleCorners brute_force_corners(const std::vector<double>& values) {
    const int f_max = static_cast<int>(values.size() / 2);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(f_max - 1, std::vector<double>(f_max - 1));
    for (int f1 = -f_max + 1; f1 <= -1; ++f1) {
        for (int f2 = 1; f2 <= f_max - 1; ++f2) {
            const double j = direct_log_ms(values, -f_max, f1) + direct_log_ms(values, f1, f2) +
                             direct_log_ms(values, f2, f_max);
            cost[f1 + f_max - 1][f2 - 1] = j;
            best = std::min(best, j);
        }
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    OracleCorners out{0, 0, best};
    bool found = false;
    for (int f1 = -f_max + 1; f1 <= -1; ++f1) {
        for (int f2 = 1; f2 <= f_max - 1; ++f2) {
            const double j = cost[f1 + f_max - 1][f2 - 1];
            if (j > best + tol) continue;
            const int width = f2 - f1;
            const int best_width = out.f_pc - out.f_nc;
            if (!found || width < best_width || (width == best_width && f2 < out.f_pc)) {
                out = {f1, f2, j};
                found = true;
            }
        }
    }
    return out;
}

}  // namespace radoppler::test
