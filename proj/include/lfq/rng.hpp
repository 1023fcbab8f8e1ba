#pragma once

#include <cstdint>
#include <limits>

namespace lfq {

/// SplitMix64. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
   public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : s_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

   private:
    std::uint64_t s_;
};

/// Counter-based stream key: a substream per (seed, index, lane).
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
    SplitMix64 g(seed ^ 0x243f6a8885a308d3ULL);
    std::uint64_t k = g() ^ index;
    SplitMix64 h(k);
    k = h() ^ (lane * 0x9e3779b97f4a7c15ULL);
    SplitMix64 z(k);
    return z();
}

}  // namespace lfq
