#pragma once

// Deterministic random numbers.
//
// Generator: xoshiro256** seeded through SplitMix64. Replicate i of a run with
// master seed S draws from Rng::stream(S, i), so results never depend on which
// thread evaluates which replicate. All variate transforms (uniform, normal,
// binomial, shuffles) are implemented here rather than taken from <random>,
// whose distributions are implementation-defined.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace ceda {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    /// Independent stream `index` derived from `master`.
    static Rng stream(std::uint64_t master, std::uint64_t index) noexcept {
        std::uint64_t a = master;
        std::uint64_t b = index ^ 0xD1B54A32D192ED03ULL;
        const std::uint64_t h = splitmix64(a) ^ (splitmix64(b) * 0x9E3779B97F4A7C15ULL);
        return Rng(h);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open() noexcept {
        double u;
        do { u = uniform(); } while (u == 0.0);
        return u;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) return 0;
        __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<__uint128_t>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via the Marsaglia polar method (second variate discarded).
    double normal() noexcept {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    /// Binomial(n, p). Inversion from zero for small means, otherwise inversion
    /// over outcomes visited outward from the mode in decreasing-probability order.
    std::uint64_t binomial(std::uint64_t n, double p) noexcept {
        if (n == 0 || !(p > 0.0)) return 0;
        if (p >= 1.0) return n;
        if (p > 0.5) return n - binomial(n, 1.0 - p);

        const double q = 1.0 - p;
        const double nd = static_cast<double>(n);
        const double ratio = p / q;

        if (nd * p < 30.0) {
            double f = std::exp(nd * std::log1p(-p));
            double u = uniform();
            std::uint64_t k = 0;
            while (u > f && k < n) {
                u -= f;
                ++k;
                f *= ratio * static_cast<double>(n - k + 1) / static_cast<double>(k);
                if (f <= 0.0) break;
            }
            return k;
        }

        const auto mode = static_cast<std::uint64_t>(std::floor((nd + 1.0) * p));
        const double md = static_cast<double>(mode);
        const double log_pm = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                              std::lgamma(nd - md + 1.0) + md * std::log(p) +
                              (nd - md) * std::log1p(-p);
        const double pm = std::exp(log_pm);

        double u = uniform() - pm;
        if (u <= 0.0) return mode;
        std::uint64_t lo = mode, hi = mode;
        double plo = pm, phi = pm;
        for (;;) {
            const double next_hi = hi < n ? phi * ratio * static_cast<double>(n - hi) /
                                                static_cast<double>(hi + 1)
                                          : 0.0;
            const double next_lo = lo > 0 ? plo * static_cast<double>(lo) /
                                                (static_cast<double>(n - lo + 1) * ratio)
                                          : 0.0;
            if (next_hi <= 0.0 && next_lo <= 0.0) return mode;
            if (next_hi >= next_lo) {
                ++hi;
                phi = next_hi;
                u -= phi;
                if (u <= 0.0) return hi;
            } else {
                --lo;
                plo = next_lo;
                u -= plo;
                if (u <= 0.0) return lo;
            }
        }
    }

    /// Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::span<T> values) noexcept {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
};

/// A child seed for job `index` of a computation seeded with `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return Rng::stream(master, index)();
}

} // namespace ceda
