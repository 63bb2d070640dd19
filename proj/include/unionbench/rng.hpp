#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace unionbench {

// splitmix64 stream. Used instead of <random> engines + distributions so
// that every seeded run produces identical bytes regardless of platform or
// standard library version.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // inclusive bounds
    uint64_t uniform_u64(uint64_t lo, uint64_t hi) {
        uint64_t span = hi - lo + 1;
        return span == 0 ? next() : lo + next() % span;
    }

    int uniform_int(int lo, int hi) {
        return static_cast<int>(uniform_u64(0, static_cast<uint64_t>(hi - lo)))
               + lo;
    }

    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_u64(0, i - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
};

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Seed derivation for independent substreams: mixing in indices or labels
// yields streams that do not depend on generation order.
inline uint64_t mix(uint64_t seed, uint64_t v) {
    uint64_t z = seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix(uint64_t seed, std::string_view s) {
    return mix(seed, fnv1a64(s));
}

}  // namespace unionbench
