#pragma once

#include <climits>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace conelab {

using complexd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// True iff x = 2^j for some integer j (exactly representable).
inline bool is_dyadic(double x) {
    if (!(x > 0) || !std::isfinite(x)) return false;
    int exp = 0;
    return std::frexp(x, &exp) == 0.5;
}

inline int dyadic_log2(double x) {
    if (!is_dyadic(x)) throw std::invalid_argument("value is not a dyadic number (power of two)");
    int exp = 0;
    std::frexp(x, &exp);
    return exp - 1;
}

// Surface measure of the unit sphere S^{n-1} in R^n.
inline double sphere_surface_area(int n) {
    if (n < 1) throw std::invalid_argument("sphere_surface_area: n must be >= 1");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

struct DyadicRange {
    int lo_log2 = 0;
    int hi_log2 = 0;

    int count() const { return hi_log2 - lo_log2 + 1; }
    double value(int i) const { return std::ldexp(1.0, lo_log2 + i); }
};

// Deterministic seedable generator (identical streams on every platform).
struct SplitMix64 {
    unsigned long long state = 0;

    explicit SplitMix64(unsigned long long seed = 0) : state(seed) {}
    unsigned long long next_u64() {
        unsigned long long z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next_u64() % static_cast<unsigned long long>(hi - lo + 1));
    }
};

}  // namespace conelab
