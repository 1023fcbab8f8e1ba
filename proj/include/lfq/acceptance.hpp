#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lfq/config.hpp"
#include "lfq/store.hpp"

namespace lfq {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct AcceptanceOptions {
    CalibratedConstants cal;
    Store* store = nullptr;
    std::uint64_t seed = 20240611;
    std::uint64_t samples = 100000;
    std::set<int> only;  // empty runs all
    std::function<void(const CriterionResult&)> on_result;
};

/// Runs the numbered criteria in order. A criterion that throws is reported as failed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

/// One line per criterion: "PASS  7  complex moments ... (1.2 s)".
std::string format_result_line(const CriterionResult& r);

}  // namespace lfq
