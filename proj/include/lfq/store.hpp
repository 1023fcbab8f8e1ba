#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lfq/poly.hpp"

namespace lfq {

/// One L-polynomial in a cached sweep: monic index of D and c_1..c_{n-1}.
struct LCoeffRecord {
    std::uint64_t index = 0;
    std::vector<std::int32_t> coeffs;
};

struct CacheEntry {
    std::string kind;  // "irreducibles" or "lvalues"
    std::uint32_t q = 0;
    int param = 0;
    std::string path;  // relative to the store root
    std::uint64_t hash = 0;
};

/// On-disk cache of irreducible tables and L-value sweeps with a JSON index.
///
/// Files that fail the header checks, the size check or the index hash are
/// deleted and reported through the warning sink; the caller recomputes.
class Store {
   public:
    explicit Store(std::filesystem::path root);
    /// $LFQ_CACHE_DIR when set, otherwise ./.lfq-cache.
    static std::filesystem::path default_root();

    const std::filesystem::path& root() const { return root_; }
    void set_warning_sink(std::function<void(const std::string&)> sink) { warn_ = std::move(sink); }

    std::optional<std::vector<MonicPoly>> load_irreducibles(const PolyRing& R, int d);
    void save_irreducibles(const PolyRing& R, int d, const std::vector<MonicPoly>& table);

    std::optional<std::vector<LCoeffRecord>> load_lvalues(const Field& F, int n);
    void save_lvalues(const Field& F, int n, const std::vector<LCoeffRecord>& records);

    std::vector<CacheEntry> entries() const;
    /// Re-reads every indexed file; returns the entries that failed and drops them.
    std::vector<CacheEntry> verify();
    void clear();

    std::filesystem::path irreducible_path(const Field& F, int d) const;
    std::filesystem::path lvalue_path(const Field& F, int n) const;

   private:
    void load_index();
    void write_index() const;
    void upsert(const CacheEntry& e);
    void drop(const std::string& rel);
    std::optional<std::string> read_verified(const std::string& kind, std::uint32_t q, int param,
                                             const std::filesystem::path& file);
    void warn(const std::string& msg) const;

    std::filesystem::path root_;
    std::vector<CacheEntry> index_;
    std::function<void(const std::string&)> warn_;
};

std::uint64_t fnv1a_bytes(const std::string& bytes);

/// Raw format helpers, exposed for tests.
std::string encode_irreducibles(const Field& F, int d, const std::vector<MonicPoly>& table);
/// Throws CacheError on any inconsistency.
std::vector<MonicPoly> decode_irreducibles(const PolyRing& R, int d, const std::string& bytes);
std::string encode_lvalues(const Field& F, int n, const std::vector<LCoeffRecord>& records);
std::vector<LCoeffRecord> decode_lvalues(const Field& F, int n, const std::string& bytes);

}  // namespace lfq
