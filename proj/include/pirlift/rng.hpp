#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pirlift {

/// Deterministic seedable generator (splitmix64) with labeled substreams.
/// The algorithm is fixed here so transcripts and audits reproduce
/// bit-identically across platforms and releases.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(seed), state_(mix(seed)) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased draw in [0, n) via rejection.
    std::uint32_t below(std::uint32_t n) {
        std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = next(); } while (v >= lim);
        return (std::uint32_t)(v % n);
    }

    /// Independent substream derived from (seed, label).
    Rng sub(std::string_view label) const { return Rng(mix(key_ ^ fnv1a(label))); }
    Rng sub(std::uint64_t tag) const { return Rng(mix(key_ ^ (tag * 0x9e3779b97f4a7c15ULL + 1))); }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s) {
            h ^= (unsigned char)c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

private:
    std::uint64_t key_, state_;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

} // namespace pirlift
