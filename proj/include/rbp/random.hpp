#ifndef RBP_RANDOM_HPP
#define RBP_RANDOM_HPP

//
// Seedable, splittable random stream with a fully specified output
// sequence: std::mt19937_64 (standardized engine) for raw bits,
// SplitMix64 for deriving child seeds, 53-bit uniforms, unbiased
// rejection for bounded integers and Box-Muller for normals. The
// std:: distributions are avoided because their outputs are
// implementation-defined.
//

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace rbp {

inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64+splitmix64-split+u53+box-muller";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for stream `index` of `parent`; distinct indices give independent streams.
inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold)
                return x % n;
        }
    }

    /// Standard normal via Box-Muller (one normal per two uniforms).
    double normal() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    bool bernoulli(double p) { return uniform() < p; }

    Rng split(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace rbp

#endif // RBP_RANDOM_HPP
