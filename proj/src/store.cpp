#include "lfq/store.hpp"

#include <cstdlib>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "lfq/primes.hpp"

namespace lfq {

namespace fs = std::filesystem;

std::uint64_t fnv1a_bytes(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

constexpr char kIrrMagic[6] = {'F', 'Q', 'I', 'R', 'R', '1'};
constexpr char kLvlMagic[6] = {'F', 'Q', 'L', 'V', 'L', '1'};
constexpr std::size_t kHeader = 6 + 4 + 4 + 4 + 8;

template <class T>
void put(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size()) throw CacheError("truncated cache file");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{static_cast<unsigned char>(in[pos + i])} << (8 * i);
    pos += sizeof(T);
    return static_cast<T>(v);
}

void put_header(std::string& out, const char* magic, const Field& F, std::uint32_t param, std::uint64_t count) {
    out.append(magic, 6);
    put<std::uint32_t>(out, F.p());
    put<std::uint32_t>(out, F.e());
    put<std::uint32_t>(out, param);
    put<std::uint64_t>(out, count);
}

std::uint64_t check_header(const std::string& in, const char* magic, const Field& F, std::uint32_t param) {
    if (in.size() < kHeader || std::memcmp(in.data(), magic, 6) != 0) throw CacheError("bad magic");
    std::size_t pos = 6;
    const auto p = get<std::uint32_t>(in, pos);
    const auto e = get<std::uint32_t>(in, pos);
    const auto d = get<std::uint32_t>(in, pos);
    if (p != F.p() || e != F.e() || d != param) throw CacheError("header does not match the field");
    return get<std::uint64_t>(in, pos);
}

std::optional<std::string> slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& file, const std::string& bytes) {
    fs::create_directories(file.parent_path());
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw CacheError("short write to " + tmp.string());
    }
    fs::rename(tmp, file);
}

}  // namespace

std::string encode_irreducibles(const Field& F, int d, const std::vector<MonicPoly>& table) {
    std::string out;
    out.reserve(kHeader + table.size() * 2 * d);
    put_header(out, kIrrMagic, F, static_cast<std::uint32_t>(d), table.size());
    for (const auto& P : table)
        for (int i = 0; i < d; ++i) put<std::uint16_t>(out, P[i].v);
    return out;
}

std::vector<MonicPoly> decode_irreducibles(const PolyRing& R, int d, const std::string& bytes) {
    const std::uint64_t count = check_header(bytes, kIrrMagic, R.field(), static_cast<std::uint32_t>(d));
    if (BigInt(count) != pi_q(R.q(), d)) throw CacheError("record count differs from pi_q");
    if (bytes.size() != kHeader + count * 2 * static_cast<std::uint64_t>(d)) throw CacheError("file size mismatch");
    std::vector<MonicPoly> out;
    out.reserve(count);
    std::size_t pos = kHeader;
    Poly c(static_cast<std::size_t>(d) + 1);
    for (std::uint64_t r = 0; r < count; ++r) {
        for (int i = 0; i < d; ++i) {
            const auto v = get<std::uint16_t>(bytes, pos);
            if (v >= R.q()) throw CacheError("coefficient out of range");
            c[i] = Fq{v};
        }
        c[d] = Fq{1};
        MonicPoly P(c);
        if (!out.empty() && !(out.back() < P)) throw CacheError("records not strictly increasing");
        out.push_back(std::move(P));
    }
    return out;
}

std::string encode_lvalues(const Field& F, int n, const std::vector<LCoeffRecord>& records) {
    std::string out;
    put_header(out, kLvlMagic, F, static_cast<std::uint32_t>(n), records.size());
    for (const auto& rec : records) {
        if (rec.coeffs.size() != static_cast<std::size_t>(std::max(n - 1, 0)))
            throw CacheError("L-value record has the wrong length");
        put<std::uint64_t>(out, rec.index);
        for (auto c : rec.coeffs) put<std::uint32_t>(out, static_cast<std::uint32_t>(c));
    }
    return out;
}

std::vector<LCoeffRecord> decode_lvalues(const Field& F, int n, const std::string& bytes) {
    const std::uint64_t count = check_header(bytes, kLvlMagic, F, static_cast<std::uint32_t>(n));
    const std::size_t width = static_cast<std::size_t>(std::max(n - 1, 0));
    if (bytes.size() != kHeader + count * (8 + 4 * width)) throw CacheError("file size mismatch");
    std::vector<LCoeffRecord> out(count);
    std::size_t pos = kHeader;
    for (auto& rec : out) {
        rec.index = get<std::uint64_t>(bytes, pos);
        rec.coeffs.resize(width);
        for (auto& c : rec.coeffs) c = static_cast<std::int32_t>(get<std::uint32_t>(bytes, pos));
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].index <= out[i - 1].index) throw CacheError("records not strictly increasing");
    return out;
}

Store::Store(fs::path root) : root_(std::move(root)) {
    warn_ = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
    load_index();
}

fs::path Store::default_root() {
    if (const char* env = std::getenv("LFQ_CACHE_DIR"); env && *env) return fs::path(env);
    return fs::path(".lfq-cache");
}

void Store::warn(const std::string& msg) const {
    if (warn_) warn_(msg);
}

fs::path Store::irreducible_path(const Field& F, int d) const {
    return root_ / fmt::format("irr_{:016x}_d{}.bin", F.content_hash(), d);
}

fs::path Store::lvalue_path(const Field& F, int n) const {
    return root_ / fmt::format("lval_{:016x}_n{}.bin", F.content_hash(), n);
}

void Store::load_index() {
    index_.clear();
    auto bytes = slurp(root_ / "index.json");
    if (!bytes) return;
    try {
        const auto j = nlohmann::json::parse(*bytes);
        for (const auto& e : j.at("entries")) {
            index_.push_back({e.at("kind").get<std::string>(), e.at("q").get<std::uint32_t>(), e.at("param").get<int>(),
                              e.at("path").get<std::string>(),
                              std::stoull(e.at("hash").get<std::string>(), nullptr, 16)});
        }
    } catch (const std::exception& ex) {
        warn(fmt::format("cache index unreadable ({}); starting empty", ex.what()));
        index_.clear();
    }
}

void Store::write_index() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : index_)
        arr.push_back({{"kind", e.kind}, {"q", e.q}, {"param", e.param}, {"path", e.path},
                       {"hash", fmt::format("{:016x}", e.hash)}});
    nlohmann::json j{{"version", 1}, {"entries", arr}};
    spit(root_ / "index.json", j.dump(2) + "\n");
}

void Store::upsert(const CacheEntry& e) {
    for (auto& x : index_)
        if (x.path == e.path) {
            x = e;
            write_index();
            return;
        }
    index_.push_back(e);
    write_index();
}

void Store::drop(const std::string& rel) {
    std::error_code ec;
    fs::remove(root_ / rel, ec);
    std::erase_if(index_, [&](const CacheEntry& e) { return e.path == rel; });
    write_index();
}

std::optional<std::string> Store::read_verified(const std::string& kind, std::uint32_t q, int param,
                                                const fs::path& file) {
    const std::string rel = file.filename().string();
    auto it = std::find_if(index_.begin(), index_.end(), [&](const CacheEntry& e) { return e.path == rel; });
    auto bytes = slurp(file);
    if (!bytes) {
        if (it != index_.end()) drop(rel);
        return std::nullopt;
    }
    if (it == index_.end() || it->kind != kind || it->q != q || it->param != param) {
        warn(fmt::format("cache file {} is not indexed; discarding", rel));
        drop(rel);
        return std::nullopt;
    }
    if (fnv1a_bytes(*bytes) != it->hash) {
        warn(fmt::format("cache file {} fails its hash check; discarding", rel));
        drop(rel);
        return std::nullopt;
    }
    return bytes;
}

std::optional<std::vector<MonicPoly>> Store::load_irreducibles(const PolyRing& R, int d) {
    const fs::path file = irreducible_path(R.field(), d);
    auto bytes = read_verified("irreducibles", R.q(), d, file);
    if (!bytes) return std::nullopt;
    try {
        return decode_irreducibles(R, d, *bytes);
    } catch (const CacheError& ex) {
        warn(fmt::format("cache file {} is corrupt ({}); discarding", file.filename().string(), ex.what()));
        drop(file.filename().string());
        return std::nullopt;
    }
}

void Store::save_irreducibles(const PolyRing& R, int d, const std::vector<MonicPoly>& table) {
    const fs::path file = irreducible_path(R.field(), d);
    const std::string bytes = encode_irreducibles(R.field(), d, table);
    try {
        spit(file, bytes);
        upsert({"irreducibles", R.q(), d, file.filename().string(), fnv1a_bytes(bytes)});
    } catch (const std::exception& ex) {
        warn(fmt::format("could not persist {} ({})", file.filename().string(), ex.what()));
    }
}

std::optional<std::vector<LCoeffRecord>> Store::load_lvalues(const Field& F, int n) {
    const fs::path file = lvalue_path(F, n);
    auto bytes = read_verified("lvalues", F.q(), n, file);
    if (!bytes) return std::nullopt;
    try {
        return decode_lvalues(F, n, *bytes);
    } catch (const CacheError& ex) {
        warn(fmt::format("cache file {} is corrupt ({}); discarding", file.filename().string(), ex.what()));
        drop(file.filename().string());
        return std::nullopt;
    }
}

void Store::save_lvalues(const Field& F, int n, const std::vector<LCoeffRecord>& records) {
    const fs::path file = lvalue_path(F, n);
    const std::string bytes = encode_lvalues(F, n, records);
    try {
        spit(file, bytes);
        upsert({"lvalues", F.q(), n, file.filename().string(), fnv1a_bytes(bytes)});
    } catch (const std::exception& ex) {
        warn(fmt::format("could not persist {} ({})", file.filename().string(), ex.what()));
    }
}

std::vector<CacheEntry> Store::entries() const { return index_; }

std::vector<CacheEntry> Store::verify() {
    std::vector<CacheEntry> bad;
    for (const auto& e : std::vector<CacheEntry>(index_)) {
        auto bytes = slurp(root_ / e.path);
        bool ok = bytes && fnv1a_bytes(*bytes) == e.hash;
        if (ok) {
            try {
                const Field F = Field::from_order(e.q);
                if (e.kind == "irreducibles") decode_irreducibles(PolyRing(F), e.param, *bytes);
                else decode_lvalues(F, e.param, *bytes);
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) {
            bad.push_back(e);
            drop(e.path);
        }
    }
    return bad;
}

void Store::clear() {
    for (const auto& e : index_) {
        std::error_code ec;
        fs::remove(root_ / e.path, ec);
    }
    index_.clear();
    std::error_code ec;
    fs::remove(root_ / "index.json", ec);
}

}  // namespace lfq
