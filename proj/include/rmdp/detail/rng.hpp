#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace rmdp::detail {

/// SplitMix64 generator (Steele, Lea, Flood 2014). Chosen over std::mt19937
/// so that streams are fully specified by the constants below and can be
/// reproduced from any language.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) using the top 53 bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes two uniforms.
    double normal() {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    /// Uniform sample on the probability simplex via normalized exponentials.
    std::vector<double> simplex(std::size_t dim) {
        std::vector<double> p(dim);
        double total = 0.0;
        for (auto& v : p) {
            v = -std::log(1.0 - uniform01());
            total += v;
        }
        for (auto& v : p) v /= total;
        return p;
    }

private:
    std::uint64_t state_;
};

} // namespace rmdp::detail
