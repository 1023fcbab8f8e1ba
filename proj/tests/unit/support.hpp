#pragma once

// Hand-rolled generators for the property tests. Every generator is driven by
// an explicit seed so a failing case can be replayed from the printed seed.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lfq/poly.hpp"
#include "lfq/rng.hpp"

namespace lfq::test {

class Gen {
   public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t next() { return rng_(); }
    std::uint64_t below(std::uint64_t n) { return n ? rng_() % n : 0; }
    int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    Fq element(const Field& F) { return Fq{static_cast<std::uint16_t>(below(F.q()))}; }
    Fq nonzero(const Field& F) { return Fq{static_cast<std::uint16_t>(1 + below(F.q() - 1))}; }

    Poly poly(const PolyRing& R, int max_deg) {
        Poly a(static_cast<std::size_t>(between(0, max_deg) + 1));
        for (auto& c : a) c = element(R.field());
        normalize(a);
        return a;
    }
    MonicPoly monic(const PolyRing& R, int d) {
        return R.monic_from_index(d, below(R.monic_count(d)));
    }
    MonicPoly monic_up_to(const PolyRing& R, int lo, int hi) { return monic(R, between(lo, hi)); }
    MonicPoly squarefree(const PolyRing& R, int d) {
        for (;;) {
            auto f = monic(R, d);
            if (R.is_squarefree(f)) return f;
        }
    }
    MonicPoly irreducible(const PolyRing& R, int d) {
        for (;;) {
            auto f = monic(R, d);
            if (R.is_irreducible(f)) return f;
        }
    }

   private:
    SplitMix64 rng_;
};

inline std::vector<MonicPoly> all_monic(const PolyRing& R, int d) {
    std::vector<MonicPoly> out;
    for (std::uint64_t i = 0; i < R.monic_count(d); ++i) out.push_back(R.monic_from_index(d, i));
    return out;
}

inline Poly P(const PolyRing& R, std::vector<std::uint32_t> low_to_high) { return R.from_indices(low_to_high); }
inline MonicPoly M(const PolyRing& R, std::vector<std::uint32_t> low_to_high) {
    return MonicPoly(R.from_indices(low_to_high));
}

/// A scratch directory removed on destruction.
class TempDir {
   public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("lfq-test-" + tag + "-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

   private:
    std::filesystem::path path_;
};

}  // namespace lfq::test
