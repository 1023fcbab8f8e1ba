#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lfq/acceptance.hpp"
#include "lfq/ensemble.hpp"
#include "lfq/primes.hpp"
#include "lfq/store.hpp"
#include "support.hpp"

using namespace lfq;
using namespace lfq::test;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << s;
}

// Rewrites the indexed hash so that only the decoder can catch the damage.
void rehash(const fs::path& root, const fs::path& file) {
    auto j = nlohmann::json::parse(read_file(root / "index.json"));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a_bytes(read_file(file))));
    for (auto& e : j["entries"])
        if (e["path"] == file.filename().string()) e["hash"] = buf;
    write_file(root / "index.json", j.dump(2));
}

struct Warnings {
    std::vector<std::string> seen;
    void attach(Store& s) {
        s.set_warning_sink([this](const std::string& m) { seen.push_back(m); });
    }
    bool any(const std::string& needle) const {
        for (const auto& m : seen)
            if (m.find(needle) != std::string::npos) return true;
        return false;
    }
};

}  // namespace

TEST_CASE("cache file encodings round trip") {
    for (std::uint32_t q : {5u, 9u, 2u}) {
        const PolyRing R(Field::from_order(q));
        for (int d = 1; d <= 4; ++d) {
            const auto t = compute_irreducibles(R, d);
            const auto bytes = encode_irreducibles(R.field(), d, t);
            REQUIRE(bytes.substr(0, 6) == "FQIRR1");
            REQUIRE(decode_irreducibles(R, d, bytes) == t);
        }
    }
    const Field F = Field::make(5, 1);
    const auto recs = sweep_coefficients(EnsembleSpec(F, 4));
    const auto bytes = encode_lvalues(F, 4, recs);
    CHECK(bytes.substr(0, 6) == "FQLVL1");
    const auto back = decode_lvalues(F, 4, bytes);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        REQUIRE(back[i].index == recs[i].index);
        REQUIRE(back[i].coeffs == recs[i].coeffs);
    }
}

TEST_CASE("decoders reject damaged bytes") {
    const PolyRing R(Field::make(5, 1));
    const auto good = encode_irreducibles(R.field(), 3, compute_irreducibles(R, 3));
    auto magic = good;
    magic[0] = 'X';
    CHECK_THROWS_AS(decode_irreducibles(R, 3, magic), CacheError);
    CHECK_THROWS_AS(decode_irreducibles(R, 3, good.substr(0, good.size() - 1)), CacheError);
    CHECK_THROWS_AS(decode_irreducibles(R, 3, good.substr(0, 10)), CacheError);
    CHECK_THROWS_AS(decode_irreducibles(R, 3, good + "x"), CacheError);
    CHECK_THROWS_AS(decode_irreducibles(R, 2, good), CacheError);
    CHECK_THROWS_AS(decode_irreducibles(PolyRing(Field::make(3, 2)), 3, good), CacheError);
    auto range = good;
    range[26] = 7;  // first coefficient >= q
    CHECK_THROWS_AS(decode_irreducibles(R, 3, range), CacheError);
    auto order = good;
    std::swap_ranges(order.begin() + 26, order.begin() + 32, order.begin() + 32);  // swap records 0 and 1
    CHECK_THROWS_AS(decode_irreducibles(R, 3, order), CacheError);

    const Field F = R.field();
    const auto lv = encode_lvalues(F, 3, sweep_coefficients(EnsembleSpec(F, 3)));
    CHECK_THROWS_AS(decode_lvalues(F, 3, lv.substr(0, lv.size() - 3)), CacheError);
    CHECK_THROWS_AS(decode_lvalues(F, 4, lv), CacheError);
    auto lm = lv;
    lm[3] = 'R';
    CHECK_THROWS_AS(decode_lvalues(F, 3, lm), CacheError);
}

TEST_CASE("store save, index and reload") {
    TempDir dir("store");
    const PolyRing R(Field::make(5, 1));
    {
        Store s(dir.path());
        CHECK(s.entries().empty());
        CHECK_FALSE(s.load_irreducibles(R, 3));
        const auto t = irreducibles(R, 3, &s);
        CHECK(fs::exists(s.irreducible_path(R.field(), 3)));
        CHECK(s.load_irreducibles(R, 3) == t);
        sweep_lvalues(EnsembleSpec(R.field(), 4), &s);
        CHECK(fs::exists(s.lvalue_path(R.field(), 4)));
    }
    const auto j = nlohmann::json::parse(read_file(dir.path() / "index.json"));
    CHECK(j["version"] == 1);
    REQUIRE(j["entries"].size() >= 2);
    for (const auto& e : j["entries"]) {
        const std::string path = e["path"];
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a_bytes(read_file(dir.path() / path))));
        CHECK(e["hash"] == std::string(buf));
        CHECK(e["q"] == 5);
        CHECK((e["kind"] == "irreducibles" || e["kind"] == "lvalues"));
    }

    Store again(dir.path());
    Warnings w;
    w.attach(again);
    CHECK(again.entries().size() == j["entries"].size());
    CHECK(again.load_irreducibles(R, 3) == compute_irreducibles(R, 3));
    CHECK(sweep_lvalues(EnsembleSpec(R.field(), 4), &again).from_cache);
    CHECK(again.verify().empty());
    CHECK(w.seen.empty());

    again.clear();
    CHECK(again.entries().empty());
    CHECK_FALSE(fs::exists(dir.path() / "index.json"));
    CHECK_FALSE(fs::exists(again.irreducible_path(R.field(), 3)));
}

TEST_CASE("corruption is detected, reported and rebuilt") {
    const PolyRing R(Field::make(5, 1));
    const auto truth = compute_irreducibles(R, 4);
    auto fresh = [&](const TempDir& dir) {
        Store s(dir.path());
        irreducibles(R, 4, &s);
        return s.irreducible_path(R.field(), 4);
    };

    SUBCASE("byte flip") {
        TempDir dir("flip");
        const auto file = fresh(dir);
        auto b = read_file(file);
        b[b.size() / 2] ^= 0x01;
        write_file(file, b);
        Store s(dir.path());
        Warnings w;
        w.attach(s);
        CHECK(irreducibles(R, 4, &s) == truth);
        CHECK(w.any("hash"));
        CHECK(s.load_irreducibles(R, 4) == truth);  // rebuilt and re-persisted
    }
    SUBCASE("truncation") {
        TempDir dir("trunc");
        const auto file = fresh(dir);
        const auto b = read_file(file);
        write_file(file, b.substr(0, b.size() - 5));
        rehash(dir.path(), file);
        Store s(dir.path());
        Warnings w;
        w.attach(s);
        CHECK(irreducibles(R, 4, &s) == truth);
        CHECK(w.any("corrupt"));
    }
    SUBCASE("wrong magic") {
        TempDir dir("magic");
        const auto file = fresh(dir);
        auto b = read_file(file);
        b[2] = 'L';
        write_file(file, b);
        rehash(dir.path(), file);
        Store s(dir.path());
        Warnings w;
        w.attach(s);
        CHECK(irreducibles(R, 4, &s) == truth);
        CHECK(w.any("bad magic"));
    }
    SUBCASE("file missing from the index") {
        TempDir dir("unindexed");
        const auto file = fresh(dir);
        fs::remove(dir.path() / "index.json");
        Store s(dir.path());
        Warnings w;
        w.attach(s);
        CHECK(irreducibles(R, 4, &s) == truth);
        CHECK(w.any("not indexed"));
    }
    SUBCASE("unreadable index") {
        TempDir dir("index");
        fresh(dir);
        write_file(dir.path() / "index.json", "{not json");
        Store s(dir.path());  // warns on stderr and starts empty
        CHECK(s.entries().empty());
        Warnings w;
        w.attach(s);
        CHECK(irreducibles(R, 4, &s) == truth);
        CHECK(w.any("not indexed"));
        CHECK(s.entries().size() == 1);
    }
    SUBCASE("verify drops damaged entries") {
        TempDir dir("verify");
        const auto file = fresh(dir);
        Store s(dir.path());
        sweep_lvalues(EnsembleSpec(R.field(), 3), &s);
        const auto before = s.entries().size();
        REQUIRE(before >= 2);
        auto b = read_file(file);
        b.back() ^= 0x40;
        write_file(file, b);
        const auto bad = s.verify();
        REQUIRE(bad.size() == 1);
        CHECK(bad[0].kind == "irreducibles");
        CHECK(bad[0].param == 4);
        CHECK(s.entries().size() == before - 1);
        CHECK_FALSE(fs::exists(file));
        CHECK(s.verify().empty());
    }
}

TEST_CASE("default cache root") {
    const char* old = std::getenv("LFQ_CACHE_DIR");
    const std::string saved = old ? old : "";
    ::setenv("LFQ_CACHE_DIR", "/tmp/lfq-somewhere", 1);
    CHECK(Store::default_root() == fs::path("/tmp/lfq-somewhere"));
    ::setenv("LFQ_CACHE_DIR", "", 1);
    CHECK(Store::default_root() == fs::path(".lfq-cache"));
    ::unsetenv("LFQ_CACHE_DIR");
    CHECK(Store::default_root() == fs::path(".lfq-cache"));
    if (old) ::setenv("LFQ_CACHE_DIR", saved.c_str(), 1);
}

TEST_CASE("acceptance survives a corrupted cache") {
    TempDir dir("accept");
    AcceptanceOptions opt;
    opt.only = {7};  // reads the H_8 sweep through the store
    {
        Store s(dir.path());
        opt.store = &s;
        for (const auto& r : run_acceptance(opt)) CHECK(r.passed);
        CHECK_FALSE(s.entries().empty());
    }
    for (const auto& e : fs::directory_iterator(dir.path())) {
        if (e.path().filename() == "index.json") continue;
        auto b = read_file(e.path());
        b[b.size() / 3] ^= 0x10;
        write_file(e.path(), b);
    }
    Store s(dir.path());
    Warnings w;
    w.attach(s);
    opt.store = &s;
    const auto res = run_acceptance(opt);
    REQUIRE(res.size() == 1);
    for (const auto& r : res) CHECK_MESSAGE(r.passed, r.detail);
    CHECK_FALSE(w.seen.empty());
    CHECK(s.verify().empty());
}
