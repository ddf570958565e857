#pragma once

#include <cmath>
#include <cstdint>

namespace polling {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based stream: draw k is mix64(key + k * golden). Substream r of a seed
// uses key = mix64(seed + (r + 1) * 0xD1B54A32D192ED03).
class Rng {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    explicit Rng(std::uint64_t key) : key_(key) {}
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix64(seed + (index + 1) * 0xD1B54A32D192ED03ull));
    }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
    double normal() {
        // Box-Muller, one value per call.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace polling
