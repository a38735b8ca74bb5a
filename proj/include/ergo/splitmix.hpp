#pragma once

#include <cstdint>

namespace ergo {

// splitmix64: tiny, fast, full-period 2^64 generator with a fixed published
// constant set.  Used for every seeded choice in the library so that runs
// are reproducible across platforms and standard-library versions
// (std::mt19937 would be portable too, but std::uniform_int_distribution is
// not; we keep both the engine and the bounding scheme pinned here).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, bound) by rejection; bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~0ull) / bound);
        std::uint64_t draw;
        do {
            draw = next();
        } while (draw >= limit);
        return draw % bound;
    }

    // Derives an independent stream for a labeled sub-task.
    SplitMix64 fork(std::uint64_t label) {
        return SplitMix64(next() ^ (0x6a09e667f3bcc909ull + label));
    }

private:
    std::uint64_t state_;
};

// FNV-1a over a byte string; used to fingerprint configs in run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const unsigned char* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ull;
    }
    return hash;
}

}  // namespace ergo
