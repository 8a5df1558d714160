#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace ceda {

/// x ln x with 0 ln 0 = 0.
inline double xlogx(double x) noexcept { return x > 0.0 ? x * std::log(x) : 0.0; }

inline double xlogx(std::uint64_t n) noexcept { return xlogx(static_cast<double>(n)); }

/// Quantile of already-sorted data, linear interpolation between order
/// statistics: position h = (n - 1) q.
inline double quantile_sorted(std::span<const double> sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::span<const double> values, double q) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, q);
}

inline double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

/// Sample standard deviation (n - 1 denominator).
inline double sample_sd(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

namespace detail {

/// Fixed-point text with `digits` decimals, for human-readable tables.
inline std::string format_fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace detail

} // namespace ceda
