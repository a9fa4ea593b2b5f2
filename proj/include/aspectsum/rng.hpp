#pragma once

#include <cstdint>

namespace aspectsum {

/// SplitMix64 (Steele, Lea & Flood 2014; the seeding generator of
/// xoshiro256**). Fixed arithmetic, so streams are identical on every
/// platform and compiler, unlike std:: distributions.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1], 53-bit resolution.
    constexpr double uniform_open_zero() noexcept {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace aspectsum
