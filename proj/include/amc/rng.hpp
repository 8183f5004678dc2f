#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace amc {

// Derives an independent child seed from (seed, stream). splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// mt19937_64 with explicit value mappings. The standard pins the raw engine
// sequence; the mappings below avoid the implementation-defined
// std::*_distribution classes, so seeded runs reproduce across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform index in [0, n); n > 0. Modulo bias is < 2^-40 for n < 2^24.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % n);
    }

    // standard normal, Box-Muller; one uniform pair yields two deviates
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto [a, b] = normal_pair();
        spare_ = b;
        have_spare_ = true;
        return a;
    }

    std::pair<double, double> normal_pair() {
        // u1 in (0, 1] keeps the log finite
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * 3.141592653589793238462643383279502884 * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace amc
