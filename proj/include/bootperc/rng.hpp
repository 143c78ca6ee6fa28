#pragma once

#include <cstdint>

namespace bootperc {

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless generator keyed by (key, counter): same inputs, same draw, on
// every platform and in every iteration order.
constexpr std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter) {
    return mix64(key ^ mix64(counter ^ 0x6a09e667f3bcc909ULL));
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) {
    return static_cast<double>(counter_hash(key, counter) >> 11) * 0x1.0p-53;
}

// Per-trial seed derived from a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return counter_hash(mix64(master ^ 0xbb67ae8584caa73bULL), index);
}

}  // namespace bootperc
