#pragma once

#include <cstdint>

// Counter-style random streams.
//
// Every random draw in the library comes from a SplitMix64 generator whose
// starting state is derived from a user seed plus a chain of indices
// (cell, replication, ...) via `substream`. Because a stream depends only on
// its indices, results do not depend on execution order or thread count.
//
//   mix64(z)            SplitMix64 output finalizer (Stafford "Mix13"):
//                         z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
//                         z ^= z >> 27; z *= 0x94d049bb133111eb;
//                         z ^= z >> 31;
//   substream(s, i)     mix64(mix64(s) + 0x9e3779b97f4a7c15 * (i + 1))
//   SplitMix64::next()  state += 0x9e3779b97f4a7c15; return mix64(state)
//   uniform in (0,1]    ((next() >> 11) + 1) * 2^-53

namespace tsallis::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(mix64(seed) + kGoldenGamma * (index + 1));
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    /// Uniform double on (0, 1]; never returns 0.
    constexpr double uniform_open_closed() noexcept {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace tsallis::rng
