#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hodgekit {

/// One violated axiom or noteworthy fact found by a validator.
struct Finding {
    std::string axiom;    // short id, e.g. "commutation", "graded-purity"
    std::string location; // where it failed, e.g. "pair (1,2)", "(k,l)=(1,0)"
    std::string detail;
};

/// Validator outcome: pass unless failures were recorded. Notes carry
/// informational findings that do not affect the verdict.
struct Report {
    std::vector<Finding> failures;
    std::vector<Finding> notes;

    bool pass() const { return failures.empty(); }

    void fail(std::string axiom, std::string location = "", std::string detail = "") {
        failures.push_back({std::move(axiom), std::move(location), std::move(detail)});
    }
    void note(std::string axiom, std::string location = "", std::string detail = "") {
        notes.push_back({std::move(axiom), std::move(location), std::move(detail)});
    }
    void require(bool ok, std::string axiom, std::string location = "",
                 std::string detail = "") {
        if (!ok) fail(std::move(axiom), std::move(location), std::move(detail));
    }
    void absorb(const Report& sub, const std::string& prefix) {
        for (const auto& f : sub.failures)
            failures.push_back({prefix + "/" + f.axiom, f.location, f.detail});
        for (const auto& n : sub.notes)
            notes.push_back({prefix + "/" + n.axiom, n.location, n.detail});
    }
};

} // namespace hodgekit
