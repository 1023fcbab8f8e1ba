#include "lfq/config.hpp"

#include "lfq/error.hpp"

namespace lfq {

namespace {

#define LFQ_CAL_FIELDS(X)                                                                                   \
    X(orthogonality) X(truncation) X(mertens) X(census_window) X(average_window) X(first_moment_tol)       \
    X(complex_moment_tol) X(route_tol) X(mc_sigmas) X(tail_match_tol) X(kappa_tol) X(finite_difference_tol) \
    X(curvature_lo) X(curvature_hi) X(saddle_ratio_lo) X(saddle_ratio_hi) X(saddle_min_hits) X(omega_size_tol) \
    X(omega_average_tol) X(integrality_tol) X(root_tol) X(asymptotic_window) X(continuity_window)

}  // namespace

nlohmann::json CalibratedConstants::to_json() const {
    nlohmann::json j;
    j["version"] = version;
#define X(name) j[#name] = name;
    LFQ_CAL_FIELDS(X)
#undef X
    return j;
}

CalibratedConstants CalibratedConstants::from_json(const nlohmann::json& j) {
    CalibratedConstants c;
    if (!j.is_object()) throw InputError("calibration table must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "version") {
            if (!it->is_string()) throw InputError("calibration version must be a string");
            c.version = it->get<std::string>();
            continue;
        }
        bool known = false;
#define X(name)                                                              \
    if (k == #name) {                                                        \
        if (!it->is_number()) throw InputError("calibration key " + k + " must be a number"); \
        c.name = it->get<double>();                                          \
        known = true;                                                        \
    }
        LFQ_CAL_FIELDS(X)
#undef X
        if (!known) throw InputError("unknown calibration key: " + k);
    }
    return c;
}

std::uint32_t RunConfig::q() const {
    std::uint32_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= p;
    return r;
}

nlohmann::json RunConfig::to_json() const {
    return {{"version", kVersion}, {"p", p},       {"e", e},           {"q", q()},
            {"M_model", M_model},  {"M_sample", M_sample}, {"M_L", M_L}, {"bilateral_L", bilateral},
            {"seed", seed},        {"samples", samples},   {"cache_dir", cache_dir},
            {"format", format},    {"calibration", cal.to_json()}};
}

}  // namespace lfq
