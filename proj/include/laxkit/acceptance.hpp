#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace laxkit {

struct AcceptanceOptions {
    // Replaces every floating-point tolerance; exact checks are unaffected.
    std::optional<double> tol;
    // Groups to run (see acceptance_groups); empty runs everything.
    std::set<std::string> only;
    // Directory holding the golden files; empty means the bundled data tree.
    std::string golden_dir;
    std::uint64_t seed = 7;
};

struct CriterionResult {
    int id = 0;
    std::string group;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    double budget = 0;  // runtime limit in seconds, part of the verdict
};

// painleve (1-5), involution (6), flow (7), jacobi (8), dims (9), negative (10).
std::vector<std::string> acceptance_groups();

// Throws UsageError for an unknown group name.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

// "[PASS]  3  constraint curves ...  (0.52 s)" style line.
std::string format_result(const CriterionResult& r);

}  // namespace laxkit
