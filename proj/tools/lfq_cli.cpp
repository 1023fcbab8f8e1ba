// lfq: command-line front end for the library.

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "lfq/acceptance.hpp"
#include "lfq/config.hpp"
#include "lfq/constants.hpp"
#include "lfq/ensemble.hpp"
#include "lfq/omega.hpp"
#include "lfq/parallel.hpp"
#include "lfq/random_model.hpp"
#include "lfq/saddlepoint.hpp"

namespace {

using namespace lfq;
using nlohmann::json;
using nlohmann::ordered_json;

enum Exit { kOk = 0, kInput = 1, kUsage = 2, kVerify = 3 };

class VerificationFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string num(long double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.18g}", x);
}

// Accepts a, bi, a+bi, a-bi, i, -i, with optional spaces.
cld parse_complex(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    static const std::regex re(R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i)?$)");
    static const std::regex pure(R"(^([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i$)");
    std::smatch m;
    if (std::regex_match(s, m, pure)) {
        const long double im = m[2].matched ? std::stold(m[2].str()) : 1.0L;
        return {0, m[1].str() == "-" ? -im : im};
    }
    if (!s.empty() && std::regex_match(s, m, re) && m[1].matched) {
        const long double re_part = std::stold(m[1].str());
        long double im = 0;
        if (m[2].matched) {
            im = m[3].matched ? std::stold(m[3].str()) : 1.0L;
            if (m[2].str() == "-") im = -im;
        }
        return {re_part, im};
    }
    throw InputError(fmt::format("cannot parse complex number '{}'", s));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::uint32_t> parse_indices(const std::string& s) {
    std::vector<std::uint32_t> out;
    for (const auto& tok : split(s, ',')) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw InputError(fmt::format("bad coefficient '{}'", tok));
        out.push_back(static_cast<std::uint32_t>(v));
    }
    if (out.empty()) throw InputError("empty coefficient list");
    return out;
}

// "t0:t1:step", or a comma list of values.
std::vector<long double> parse_grid(const std::string& s) {
    if (s.find(':') == std::string::npos) {
        std::vector<long double> v;
        for (const auto& tok : split(s, ',')) v.push_back(std::stold(tok));
        return v;
    }
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw InputError(fmt::format("grid '{}' is not t0:t1:step", s));
    const long double a = std::stold(parts[0]), b = std::stold(parts[1]), h = std::stold(parts[2]);
    if (!(h > 0) || b < a) throw InputError(fmt::format("grid '{}' is empty", s));
    const auto count = static_cast<std::uint64_t>(std::floor((b - a) / h + 1e-9L)) + 1;
    std::vector<long double> v;
    for (std::uint64_t i = 0; i < count; ++i) v.push_back(a + h * static_cast<long double>(i));
    return v;
}

struct Globals {
    std::uint32_t q = 5;
    bool json = false;
    std::string out;
    std::string cache_dir;
    bool no_cache = false;
    unsigned threads = 0;
    std::string calibration;
};

struct Session {
    Globals g;
    RunConfig cfg;
    std::optional<Store> store;

    Field field() const { return Field::make(cfg.p, cfg.e); }
    Store* cache() { return store ? &*store : nullptr; }

    void setup() {
        const Field F = Field::from_order(g.q);
        cfg.p = F.p();
        cfg.e = F.e();
        cfg.threads = g.threads;
        cfg.format = g.json ? "json" : "csv";
        if (!g.calibration.empty()) {
            std::ifstream in(g.calibration);
            if (!in) throw InputError(fmt::format("cannot read calibration file {}", g.calibration));
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw InputError(fmt::format("calibration file {}: {}", g.calibration, e.what()));
            }
            cfg.cal = CalibratedConstants::from_json(j);
        }
        set_thread_count(g.threads);
        if (!g.no_cache) {
            const auto root = g.cache_dir.empty() ? Store::default_root() : std::filesystem::path(g.cache_dir);
            cfg.cache_dir = root.string();
            store.emplace(root);
        }
    }

    void emit(const std::string& text) const {
        if (g.out.empty() || g.out == "-") {
            std::fwrite(text.data(), 1, text.size(), stdout);
            return;
        }
        std::ofstream f(g.out, std::ios::binary);
        if (!f) throw InputError(fmt::format("cannot write {}", g.out));
        f << text;
    }

    std::string header(const std::string& command) const {
        return fmt::format("# lfq {} {}\n# field: {}\n# config: {}\n", kVersion, command, field().describe(),
                           cfg.to_json().dump());
    }

    void emit_json(const std::string& command, ordered_json result) const {
        ordered_json doc;
        doc["command"] = command;
        doc["config"] = cfg.to_json();
        doc["result"] = std::move(result);
        emit(doc.dump(2) + "\n");
    }
};

ordered_json complex_json(cld z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

std::string poly_cell(const PolyRing& R, const Poly& a) {
    std::string s;
    for (auto c : R.to_indices(a)) s += (s.empty() ? "" : " ") + std::to_string(c);
    return s;
}

// ---- commands ----

void cmd_field_info(Session& s) {
    const Field F = s.field();
    int squares = 0;
    for (std::uint32_t a = 1; a < F.q(); ++a)
        if (F.p() != 2 && F.quadratic_character(F.element(a)) == 1) ++squares;
    const bool recip = F.p() != 2 && F.q() % 4 == 1;
    if (s.g.json) {
        s.emit_json("field-info", {{"field", F.describe()},
                                   {"p", F.p()},
                                   {"e", F.e()},
                                   {"q", F.q()},
                                   {"modulus", F.modulus()},
                                   {"hash", fmt::format("{:016x}", F.content_hash())},
                                   {"nonzero_squares", squares},
                                   {"reciprocity_without_sign", recip}});
        return;
    }
    std::string t = s.header("field-info");
    t += fmt::format("field: {}\np: {}\ne: {}\nq: {}\n", F.describe(), F.p(), F.e(), F.q());
    t += fmt::format("hash: {:016x}\nnonzero squares: {}\nq = 1 mod 4: {}\n", F.content_hash(), squares,
                     recip ? "yes" : "no");
    s.emit(t);
}

void cmd_irreducibles(Session& s, int d, bool count_only) {
    if (d < 1) throw InputError("degree must be at least 1");
    const PolyRing R(s.field());
    const auto table = count_only ? std::vector<MonicPoly>{} : irreducibles(R, d, s.cache());
    const BigInt expected = pi_q(R.q(), d);
    if (!count_only && BigInt(table.size()) != expected)
        throw VerificationFailure(fmt::format("found {} irreducibles, expected {}", table.size(), expected.str()));
    if (s.g.json) {
        ordered_json rows = ordered_json::array();
        for (const auto& P : table) rows.push_back(R.to_indices(P.coeffs()));
        s.emit_json("irreducibles", {{"degree", d}, {"count", expected.str()}, {"polynomials", rows}});
        return;
    }
    std::string t = s.header("irreducibles");
    t += fmt::format("# degree: {}\n# count: {}\n", d, expected.str());
    if (!count_only) {
        t += "index";
        for (int i = 0; i <= d; ++i) t += fmt::format(",c{}", i);
        t += "\n";
        for (std::size_t k = 0; k < table.size(); ++k) {
            t += std::to_string(k);
            for (auto c : R.to_indices(table[k].coeffs())) t += "," + std::to_string(c);
            t += "\n";
        }
    }
    s.emit(t);
}

struct LValueInfo {
    LPolynomial L;
    std::optional<long double> L1;
    std::vector<cld> roots;
    std::optional<RootMagnitudes> mags;
    std::optional<ClassNumberResult> h;
    std::optional<long double> hR;
};

LValueInfo lvalue_info(const PolyRing& R, const MonicPoly& D, long double tol) {
    require_reciprocity_field(R.field());
    LValueInfo out{l_polynomial(R, D), {}, {}, {}, {}, {}};
    if (!out.L.primitive) return out;
    out.L1 = l_value_at_1(out.L);
    out.roots = inverse_roots(out.L);
    out.mags = classify_roots(out.roots, R.q(), 1e-6L);
    if (D.degree() % 2 == 1) out.h = class_number(out.L, tol);
    else if (D.degree() >= 2) out.hR = hr_product(out.L);
    return out;
}

void cmd_lvalue(Session& s, const std::string& Dtext) {
    const PolyRing R(s.field());
    const MonicPoly D(R.from_indices(parse_indices(Dtext)));
    const auto info = lvalue_info(R, D, s.cfg.cal.integrality_tol);
    if (s.g.json) {
        ordered_json r;
        r["D"] = R.to_indices(D.coeffs());
        r["D_text"] = R.to_string(D.coeffs());
        r["squarefree"] = info.L.primitive;
        r["coeffs"] = info.L.coeffs;
        r["L1"] = info.L1 ? ordered_json(num(*info.L1)) : ordered_json(nullptr);
        ordered_json roots = ordered_json::array();
        for (const auto& a : info.roots) roots.push_back(complex_json(a));
        r["roots"] = roots;
        if (info.mags) r["root_magnitudes"] = {{"unit", info.mags->unit}, {"sqrt_q", info.mags->sqrt_q}};
        if (info.h) r["h"] = info.h->h.str();
        if (info.hR) r["hR"] = num(*info.hR);
        s.emit_json("lvalue", r);
        return;
    }
    std::string t = s.header("lvalue");
    t += fmt::format("D: {}\nsquarefree: {}\n", R.to_string(D.coeffs()), info.L.primitive ? "yes" : "no");
    t += "coeffs:";
    for (auto c : info.L.coeffs) t += fmt::format(" {}", c);
    t += "\n";
    if (info.L1) t += fmt::format("L1: {}\n", num(*info.L1));
    for (std::size_t j = 0; j < info.roots.size(); ++j)
        t += fmt::format("root {}: {} {}\n", j, num(info.roots[j].real()), num(info.roots[j].imag()));
    if (info.mags) t += fmt::format("|alpha|=1: {}\n|alpha|=sqrt q: {}\n", info.mags->unit, info.mags->sqrt_q);
    if (info.h) t += fmt::format("h: {}\n", info.h->h.str());
    if (info.hR) t += fmt::format("hR: {}\n", num(*info.hR));
    s.emit(t);
}

void cmd_class_number(Session& s, const std::string& Dtext) {
    const PolyRing R(s.field());
    require_reciprocity_field(R.field());
    const MonicPoly D(R.from_indices(parse_indices(Dtext)));
    if (!R.is_squarefree(D)) throw InputError(fmt::format("{} is not square-free", R.to_string(D.coeffs())));
    const auto L = l_polynomial(R, D);
    ordered_json r;
    std::string t = s.header("class-number");
    t += fmt::format("D: {}\n", R.to_string(D.coeffs()));
    r["D"] = R.to_indices(D.coeffs());
    r["L1"] = num(l_value_at_1(L));
    if (D.degree() % 2 == 1) {
        const auto h = class_number(L, s.cfg.cal.integrality_tol);
        r["genus"] = h.genus;
        r["h"] = h.h.str();
        r["residual"] = num(h.residual);
        t += fmt::format("genus: {}\nL1: {}\nh_D = {}\n", h.genus, num(h.L1), h.h.str());
    } else {
        const long double hr = hr_product(L);
        r["hR"] = num(hr);
        t += fmt::format("L1: {}\nh_D R_D = {}\n", num(l_value_at_1(L)), num(hr));
    }
    if (s.g.json) s.emit_json("class-number", r);
    else s.emit(t);
}

void cmd_sweep(Session& s, int n, const std::string& moments, const std::string& tails, bool per_d) {
    const Field F = s.field();
    const EnsembleSpec spec(F, n);
    const auto table = sweep_lvalues(spec, s.cache());
    std::vector<long double> sorted = table.L1;
    const long double mean = tree_sum(std::vector<long double>(table.L1));
    const long double mean_L = mean / static_cast<long double>(table.size());
    const auto ext = extreme_scan(table);
    const PolyRing R(F);

    std::vector<MomentReport> mrep;
    for (const auto& tok : split(moments, ',')) {
        const cld z = parse_complex(tok);
        mrep.push_back(empirical_moment(table, z, expectation_euler(F.q(), z, s.cfg.M_model).value));
    }
    std::vector<TailReport> trep;
    std::optional<SampleBatch> batch;
    if (!tails.empty()) {
        ModelParams mp;
        mp.M_sample = s.cfg.M_sample;
        mp.samples = s.cfg.samples;
        mp.seed = s.cfg.seed;
        batch = sample_batch(F.q(), mp, false);
        for (long double tau : parse_grid(tails)) {
            auto r = tail_counts(table, tau);
            const auto mc = phi_psi_empirical(*batch, tau);
            r.model_phi = mc.phi;
            r.model_psi = mc.psi;
            trep.push_back(r);
        }
    }

    if (s.g.json) {
        ordered_json r;
        r["n"] = n;
        r["count"] = table.size();
        r["expected_count"] = spec.size();
        r["mean_L"] = num(mean_L);
        r["max"] = {{"index", ext.argmax}, {"L", num(ext.max_L)}};
        r["min"] = {{"index", ext.argmin}, {"L", num(ext.min_L)}};
        ordered_json ms = ordered_json::array();
        for (const auto& m : mrep)
            ms.push_back({{"z", complex_json(m.z)},
                          {"empirical", complex_json(m.empirical)},
                          {"model", complex_json(m.model)},
                          {"deviation", num(m.deviation)}});
        r["moments"] = ms;
        ordered_json ts = ordered_json::array();
        for (const auto& x : trep)
            ts.push_back({{"tau", num(x.tau)},
                          {"count_high", x.count_high},
                          {"count_low", x.count_low},
                          {"frac_high", num(static_cast<long double>(x.count_high) / x.total)},
                          {"frac_low", num(static_cast<long double>(x.count_low) / x.total)},
                          {"model_phi", num(x.model_phi)},
                          {"model_psi", num(x.model_psi)},
                          {"in_theorem_range", x.in_theorem_range}});
        r["tails"] = ts;
        if (per_d) {
            ordered_json rows = ordered_json::array();
            for (std::size_t k = 0; k < table.size(); ++k)
                rows.push_back({{"index", table.index[k]}, {"L1", num(table.L1[k])}});
            r["rows"] = rows;
        }
        s.emit_json("sweep", r);
        return;
    }
    std::string t = s.header("sweep");
    t += fmt::format("# n: {}\n# count: {} (expected {})\n# mean L: {}\n", n, table.size(), spec.size(), num(mean_L));
    t += fmt::format("# max L: {} at index {}\n# min L: {} at index {}\n", num(ext.max_L), ext.argmax, num(ext.min_L),
                     ext.argmin);
    if (!mrep.empty()) {
        t += "# table: moments\nz_re,z_im,empirical_re,empirical_im,model_re,model_im,deviation\n";
        for (const auto& m : mrep)
            t += fmt::format("{},{},{},{},{},{},{}\n", num(m.z.real()), num(m.z.imag()), num(m.empirical.real()),
                             num(m.empirical.imag()), num(m.model.real()), num(m.model.imag()), num(m.deviation));
    }
    if (!trep.empty()) {
        t += "# table: tails\ntau,count_high,count_low,total,frac_high,frac_low,model_phi,model_psi,in_theorem_range\n";
        for (const auto& x : trep)
            t += fmt::format("{},{},{},{},{},{},{},{},{}\n", num(x.tau), x.count_high, x.count_low, x.total,
                             num(static_cast<long double>(x.count_high) / x.total),
                             num(static_cast<long double>(x.count_low) / x.total), num(x.model_phi),
                             num(x.model_psi), x.in_theorem_range ? 1 : 0);
    }
    if (per_d) {
        t += "# table: rows\nindex,D,L1\n";
        for (std::size_t k = 0; k < table.size(); ++k)
            t += fmt::format("{},{},{}\n", table.index[k],
                             poly_cell(R, R.monic_from_index(n, table.index[k]).coeffs()), num(table.L1[k]));
    }
    s.emit(t);
}

void cmd_model(Session& s, const std::string& zs, bool batch_rows) {
    const std::uint32_t q = s.cfg.q();
    ModelParams mp;
    mp.M_model = s.cfg.M_model;
    mp.M_sample = s.cfg.M_sample;
    mp.samples = s.cfg.samples;
    mp.seed = s.cfg.seed;
    const bool sampling = mp.samples > 0;
    std::optional<SampleBatch> b;
    if (sampling) b = sample_batch(q, mp, false);

    if (batch_rows) {
        if (!b) throw InputError("--batch needs --samples > 0");
        if (s.g.json) {
            ordered_json rows = ordered_json::array();
            for (std::uint64_t i = 0; i < b->count(); ++i)
                rows.push_back({{"index", i}, {"lnL", num(b->lnL[i])}, {"L", num(std::exp(b->lnL[i]))}});
            s.emit_json("model", {{"batch", rows}});
            return;
        }
        std::string t = s.header("model");
        t += "index,lnL,L\n";
        for (std::uint64_t i = 0; i < b->count(); ++i)
            t += fmt::format("{},{},{}\n", i, num(b->lnL[i]), num(std::exp(b->lnL[i])));
        s.emit(t);
        return;
    }

    struct Row {
        cld z;
        ModelExpectation euler;
        std::optional<ModelExpectation> divisor;
        std::optional<MeanEstimate> mc;
    };
    std::vector<Row> rows;
    for (const auto& tok : split(zs, ',')) {
        Row r{parse_complex(tok), {}, {}, {}};
        r.euler = expectation_euler(q, r.z, mp.M_model);
        if (std::abs(r.z) <= mp.z_cap) r.divisor = expectation_divisor(q, r.z, mp.M_model, mp.z_cap);
        if (b && r.z.imag() == 0) r.mc = sample_moment(*b, r.z.real());
        rows.push_back(r);
    }
    if (s.g.json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json o{{"z", complex_json(r.z)}, {"euler", complex_json(r.euler.value)},
                           {"tail_bound", num(r.euler.tail_bound)}};
            o["divisor"] = r.divisor ? complex_json(r.divisor->value) : ordered_json(nullptr);
            o["sample_mean"] = r.mc ? ordered_json(num(r.mc->mean)) : ordered_json(nullptr);
            o["sample_se"] = r.mc ? ordered_json(num(r.mc->std_error)) : ordered_json(nullptr);
            arr.push_back(o);
        }
        s.emit_json("model", {{"first_moment_constant", num(first_moment_constant(q, mp.M_model))},
                              {"expectations", arr}});
        return;
    }
    std::string t = s.header("model");
    t += fmt::format("# first moment constant: {}\n", num(first_moment_constant(q, mp.M_model)));
    t += "z_re,z_im,euler_re,euler_im,divisor_re,divisor_im,tail_bound,sample_mean,sample_se\n";
    for (const auto& r : rows) {
        t += fmt::format("{},{},{},{},", num(r.z.real()), num(r.z.imag()), num(r.euler.value.real()),
                         num(r.euler.value.imag()));
        t += r.divisor ? fmt::format("{},{},", num(r.divisor->value.real()), num(r.divisor->value.imag())) : ",,";
        t += num(r.euler.tail_bound) + ",";
        t += r.mc ? fmt::format("{},{}", num(r.mc->mean), num(r.mc->std_error)) : ",";
        t += "\n";
    }
    s.emit(t);
}

void cmd_saddle(Session& s, const std::string& taus, const std::string& grid) {
    const std::uint32_t q = s.cfg.q();
    const CurlyL L(q, s.cfg.M_L);
    SaddleOptions opt;
    opt.tol = s.cfg.cal.kappa_tol;
    opt.bilateral = s.cfg.bilateral;
    std::vector<long double> pts;
    if (!taus.empty())
        for (const auto& tok : split(taus, ',')) pts.push_back(std::stold(tok));
    if (!grid.empty())
        for (auto v : parse_grid(grid)) pts.push_back(v);
    if (pts.empty()) throw InputError("give --tau or --grid");

    ordered_json arr = ordered_json::array();
    std::string t = s.header("saddle");
    t += "tau,kappa,residual,L,L1,L2,t,G1,G2,C0,C1,phi_saddle,phi_asymptotic,psi_kappa,psi_saddle\n";
    for (long double tau : pts) {
        const auto sol = solve_kappa(L, tau, opt);
        const auto psi = psi_saddle(L, tau, opt);
        const long double asym = tau >= 2 ? sol.phi_asymptotic : std::nanl("");
        t += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(tau), num(sol.kappa), num(sol.residual),
                         num(sol.L), num(sol.L1), num(sol.L2), num(sol.t), num(sol.G1), num(sol.G2), num(sol.C0),
                         num(sol.C1), num(sol.phi_saddle), num(asym), num(psi.kappa), num(psi.psi_saddle));
        arr.push_back({{"tau", num(tau)},           {"kappa", num(sol.kappa)},   {"residual", num(sol.residual)},
                       {"L", num(sol.L)},           {"L1", num(sol.L1)},         {"L2", num(sol.L2)},
                       {"t", num(sol.t)},           {"G1", num(sol.G1)},         {"G2", num(sol.G2)},
                       {"C0", num(sol.C0)},         {"C1", num(sol.C1)},         {"phi_saddle", num(sol.phi_saddle)},
                       {"phi_asymptotic", num(asym)}, {"psi_kappa", num(psi.kappa)},
                       {"psi_saddle", num(psi.psi_saddle)}});
    }
    if (s.g.json) s.emit_json("saddle", arr);
    else s.emit(t);
}

void cmd_constants(Session& s, int points) {
    if (points < 1) throw InputError("--points must be positive");
    const std::uint32_t q = s.cfg.q();
    const auto rows = c0_c1_grid(q, points, s.cfg.bilateral);
    const auto br = c1_bracket(q);
    const long double c = find_c();
    if (s.g.json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) arr.push_back({{"t", num(r.t)}, {"C0", num(r.c0)}, {"C1", num(r.c1)}});
        s.emit_json("constants", {{"c", num(c)},
                                  {"g_c", num(g_summand(c))},
                                  {"minus_C1_lower", num(br.lower)},
                                  {"minus_C1_upper", num(br.upper)},
                                  {"grid", arr}});
        return;
    }
    std::string t = s.header("constants");
    t += fmt::format("# q: {}\n# bilateral L: {}\n# c: {}\n# g(c): {}\n# -C1 bracket: ({}, {})\n", q,
                     s.cfg.bilateral, num(c), num(g_summand(c)), num(br.lower), num(br.upper));
    t += "t,C0,C1\n";
    for (const auto& r : rows) t += fmt::format("{},{},{}\n", num(r.t), num(r.c0), num(r.c1));
    s.emit(t);
}

// Lines "c0,c1,...,+1" or "...,-1", coefficients low to high; '#' starts a comment.
SymbolPrescription read_prescription(const PolyRing& R, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot read prescription file {}", path));
    SymbolPrescription s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                   line.end());
        if (line.empty()) continue;
        const auto cut = line.rfind(',');
        if (cut == std::string::npos) throw InputError(fmt::format("{}:{}: expected coefficients and a sign", path, lineno));
        const std::string sign = line.substr(cut + 1);
        int d = 0;
        if (sign == "+1" || sign == "1" || sign == "+") d = 1;
        else if (sign == "-1" || sign == "-") d = -1;
        else throw InputError(fmt::format("{}:{}: sign must be +1 or -1", path, lineno));
        MonicPoly P(R.from_indices(parse_indices(line.substr(0, cut))));
        s.n = std::max(s.n, P.degree());
        s.primes.push_back(std::move(P));
        s.delta.push_back(d);
    }
    // Put the entries in enumeration order so validate() sees the canonical layout.
    std::vector<std::size_t> order(s.primes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return s.primes[a] < s.primes[b]; });
    SymbolPrescription sorted;
    sorted.n = s.n;
    for (auto i : order) {
        sorted.primes.push_back(s.primes[i]);
        sorted.delta.push_back(s.delta[i]);
    }
    return sorted;
}

void cmd_omega(Session& s, int N, std::optional<int> n_opt, const std::string& delta) {
    const PolyRing R(s.field());
    require_reciprocity_field(R.field());
    if (N < 1) throw InputError("--N must be positive");
    SymbolPrescription pres;
    if (delta == "plus" || delta == "minus") {
        const int n = n_opt.value_or(hunt_degree(R.q(), N));
        pres = SymbolPrescription::uniform(R, n, delta == "plus" ? 1 : -1, s.cache());
    } else {
        pres = read_prescription(R, delta);
        if (n_opt && *n_opt != pres.n)
            throw InputError(fmt::format("--n {} disagrees with the prescription degree {}", *n_opt, pres.n));
    }
    pres.validate(R, s.cache());
    const auto S = find_S(R, N, pres, s.cache());
    ordered_json r;
    r["N"] = N;
    r["n"] = pres.n;
    r["delta"] = delta;
    ordered_json pj = ordered_json::array();
    for (std::size_t i = 0; i < pres.primes.size(); ++i)
        pj.push_back({{"P", R.to_indices(pres.primes[i].coeffs())}, {"delta", pres.delta[i]}});
    r["prescription"] = pj;
    r["size"] = S.size();
    if (S.empty()) {
        r["mean_L"] = nullptr;
        s.emit_json("omega", r);
        return;
    }
    const auto rep = average_L_over_S(R, S, N, pres, s.cache());
    const long double size_dev = std::fabs(static_cast<long double>(rep.size) - rep.main_term);
    const long double mean_dev = std::fabs(rep.mean_L - rep.predicted);
    r["main_term"] = num(rep.main_term);
    r["size_deviation"] = num(size_dev);
    r["size_window"] = num(s.cfg.cal.census_window * rep.lemma_window_scale);
    r["size_in_window"] = size_dev <= s.cfg.cal.census_window * rep.lemma_window_scale;
    r["mean_L"] = num(rep.mean_L);
    r["predicted"] = num(rep.predicted);
    r["relative_deviation"] = num(rep.mean_L / rep.predicted - 1);
    r["mean_window"] = num(s.cfg.cal.average_window * rep.prop_window_scale);
    r["mean_in_window"] = mean_dev <= s.cfg.cal.average_window * rep.prop_window_scale;
    r["max"] = {{"Q", R.to_indices(rep.argmax.coeffs())}, {"L", num(rep.max_L)}};
    r["min"] = {{"Q", R.to_indices(rep.argmin.coeffs())}, {"L", num(rep.min_L)}};
    const long double lq = static_cast<long double>(N);
    if (lq > 1 && std::log(lq) / std::log(static_cast<long double>(R.q())) > 1) {
        const long double ll = std::log(lq) / std::log(static_cast<long double>(R.q()));
        const long double lll = std::log(ll) / std::log(static_cast<long double>(R.q()));
        r["benchmark_upper"] = num(std::exp(kEulerGamma) * (ll + lll));
    }
    s.emit_json("omega", r);
}

void cmd_cache_build(Session& s, int d, const std::string& ns) {
    if (!s.cache()) throw InputError("cache build needs a cache directory");
    const Field F = s.field();
    const PolyRing R(F);
    std::string t = s.header("cache build");
    for (int k = 1; k <= d; ++k) {
        const auto table = irreducibles(R, k, s.cache());
        t += fmt::format("irreducibles,{},{}\n", k, table.size());
    }
    for (const auto& tok : split(ns, ',')) {
        const int n = std::stoi(tok);
        const auto recs = sweep_coefficients(EnsembleSpec(F, n), s.cache());
        t += fmt::format("lvalues,{},{}\n", n, recs.size());
    }
    s.emit(t);
}

int cmd_cache_verify(Session& s) {
    if (!s.cache()) throw InputError("cache verify needs a cache directory");
    const auto bad = s.cache()->verify();
    const auto good = s.cache()->entries();
    if (s.g.json) {
        ordered_json arr = ordered_json::array();
        auto add = [&](const CacheEntry& e, const char* status) {
            arr.push_back({{"kind", e.kind}, {"q", e.q}, {"param", e.param}, {"path", e.path}, {"status", status}});
        };
        for (const auto& e : good) add(e, "ok");
        for (const auto& e : bad) add(e, "dropped");
        s.emit_json("cache verify", {{"root", s.cache()->root().string()}, {"entries", arr}, {"dropped", bad.size()}});
    } else {
        std::string t = s.header("cache verify") + fmt::format("# root: {}\nkind,q,param,path,status\n", s.cache()->root().string());
        for (const auto& e : good) t += fmt::format("{},{},{},{},ok\n", e.kind, e.q, e.param, e.path);
        for (const auto& e : bad) t += fmt::format("{},{},{},{},dropped\n", e.kind, e.q, e.param, e.path);
        s.emit(t);
    }
    return bad.empty() ? kOk : kVerify;
}

int cmd_verify(Session& s, const std::vector<int>& ids) {
    AcceptanceOptions opt;
    opt.cal = s.cfg.cal;
    opt.store = s.cache();
    opt.seed = s.cfg.seed;
    opt.samples = s.cfg.samples;
    opt.only = std::set<int>(ids.begin(), ids.end());
    if (!s.g.json) {
        opt.on_result = [](const CriterionResult& r) {
            fmt::print("{}\n", format_result_line(r));
            std::fflush(stdout);
        };
    }
    const auto results = run_acceptance(opt);
    int failed = 0;
    for (const auto& r : results) failed += !r.passed;
    if (s.g.json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : results)
            arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        s.emit_json("verify", {{"criteria", arr}, {"failed", failed}});
    } else {
        fmt::print("{} of {} criteria passed\n", results.size() - failed, results.size());
    }
    return failed ? kVerify : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic Dirichlet L-functions over F_q[T]: class numbers, ensemble sweeps, random model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Session s;
    app.add_option("--q", s.g.q, "field order (prime power)");
    app.add_flag("--json", s.g.json, "JSON output instead of CSV/text");
    app.add_option("--out", s.g.out, "output file (default stdout)");
    app.add_option("--cache-dir", s.g.cache_dir, "cache directory (default $LFQ_CACHE_DIR or .lfq-cache)");
    app.add_flag("--no-cache", s.g.no_cache, "do not read or write the cache");
    app.add_option("--threads", s.g.threads, "worker threads, 0 = all cores");
    app.add_option("--calibration", s.g.calibration, "JSON file overriding calibrated constants");
    app.add_option("--seed", s.cfg.seed, "RNG seed");
    app.add_option("--samples", s.cfg.samples, "Monte Carlo sample count");
    app.add_option("--M-model", s.cfg.M_model, "truncation degree for model expectations");
    app.add_option("--M-sample", s.cfg.M_sample, "truncation degree for sampling");
    app.add_option("--M-L", s.cfg.M_L, "minimum degree cutoff for the curly L sums");
    app.add_option("--bilateral", s.cfg.bilateral, "bilateral range for G1 and G2");

    auto* field_info = app.add_subcommand("field-info", "describe F_q");

    int irr_d = 1;
    bool irr_count = false;
    auto* irr = app.add_subcommand("irreducibles", "list monic irreducibles of a degree");
    irr->add_option("--d", irr_d, "degree")->required();
    irr->add_flag("--count-only", irr_count, "print the count only");

    std::string Dtext;
    bool lv_json = false;
    auto* lv = app.add_subcommand("lvalue", "L-polynomial, L(1), inverse roots");
    lv->add_option("--D", Dtext, "coefficients low to high, comma separated")->required();
    lv->add_flag("--json", lv_json, "JSON output");

    auto* cn = app.add_subcommand("class-number", "h_D for odd degree, h_D R_D for even degree");
    cn->add_option("--D", Dtext, "coefficients low to high, comma separated")->required();

    int n = 0;
    std::string moments, tails;
    bool per_d = false, sw_json = false;
    auto* sw = app.add_subcommand("sweep", "sweep H_n");
    sw->add_option("--n", n, "degree of D")->required();
    sw->add_option("--moments", moments, "complex moments z1,z2,...");
    sw->add_option("--tails", tails, "tau grid t0:t1:step");
    sw->add_flag("--rows", per_d, "emit one row per D");
    sw->add_flag("--json", sw_json, "JSON output");

    std::string zs = "1";
    bool batch = false;
    auto* model = app.add_subcommand("model", "random model expectations and samples");
    model->add_option("--z", zs, "complex z list");
    model->add_flag("--batch", batch, "emit the sample batch (index, lnL, L)");

    std::string taus, grid;
    auto* saddle = app.add_subcommand("saddle", "saddle point kappa and tail estimates");
    saddle->add_option("--tau", taus, "tau list");
    saddle->add_option("--grid", grid, "tau grid t0:t1:step");

    int points = 200;
    auto* consts = app.add_subcommand("constants", "C0(t), C1(t) on a grid");
    consts->add_option("--points", points, "grid size");

    int N = 0;
    std::optional<int> omega_n;
    std::string delta = "plus";
    auto* omega = app.add_subcommand("omega", "average and extremes of L(1) over prescribed-symbol primes");
    omega->add_option("--N", N, "degree of Q")->required();
    omega->add_option("--n", omega_n, "prescription degree (default from N)");
    omega->add_option("--delta", delta, "plus, minus, or a prescription file");

    auto* cache = app.add_subcommand("cache", "manage the on-disk cache");
    cache->require_subcommand(1);
    int cache_d = 0;
    std::string cache_n;
    auto* cache_build = cache->add_subcommand("build", "precompute tables");
    cache_build->add_option("--d", cache_d, "irreducible tables of degree 1..d");
    cache_build->add_option("--n", cache_n, "L-value sweeps for these n");
    auto* cache_verify = cache->add_subcommand("verify", "re-read every file, drop bad ones");
    auto* cache_clear = cache->add_subcommand("clear", "delete the cache");

    std::vector<int> ids;
    auto* verify = app.add_subcommand("verify", "run the acceptance battery");
    verify->add_option("criteria", ids, "criterion ids (default all)");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    for (auto* sub : cache->get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    s.g.json = s.g.json || lv_json || sw_json;

    try {
        s.setup();
        if (*field_info) cmd_field_info(s);
        else if (*irr) cmd_irreducibles(s, irr_d, irr_count);
        else if (*lv) cmd_lvalue(s, Dtext);
        else if (*cn) cmd_class_number(s, Dtext);
        else if (*sw) cmd_sweep(s, n, moments, tails, per_d);
        else if (*model) cmd_model(s, zs, batch);
        else if (*saddle) cmd_saddle(s, taus, grid);
        else if (*consts) cmd_constants(s, points);
        else if (*omega) cmd_omega(s, N, omega_n, delta);
        else if (*cache_build) cmd_cache_build(s, cache_d, cache_n);
        else if (*cache_verify) return cmd_cache_verify(s);
        else if (*cache_clear) {
            if (!s.cache()) throw InputError("cache clear needs a cache directory");
            s.cache()->clear();
        } else if (*verify) return cmd_verify(s, ids);
        return kOk;
    } catch (const InputError& e) {
        fmt::print(stderr, "lfq: {}\n", e.what());
        return kInput;
    } catch (const std::invalid_argument& e) {
        fmt::print(stderr, "lfq: {}\n", e.what());
        return kInput;
    } catch (const std::out_of_range& e) {
        fmt::print(stderr, "lfq: {}\n", e.what());
        return kInput;
    } catch (const std::exception& e) {
        fmt::print(stderr, "lfq: {}\n", e.what());
        return kVerify;
    }
}
