#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hashnets/analyze/ctl.hpp"
#include "hashnets/analyze/deadlock.hpp"
#include "hashnets/petri/reach.hpp"

namespace hashnets::interop {

inline constexpr int report_schema = 1;

struct FormulaOutcome {
    std::string text;
    int line = 0;
    std::string expanded;  // empty when expansion failed
    std::optional<analyze::CtlResult> result;
    std::string error;
};

// Transition ids along a path, e.g. "activate_start[u:0] port_send[u.p]".
[[nodiscard]] std::string path_text(const petri::InterlacedNet& n, const std::vector<std::uint32_t>& path);
// Non-zero places as "p=2, q=1".
[[nodiscard]] std::string marking_text(const petri::InterlacedNet& n, const petri::Marking& m);

// All reports carry "schema": 1.
[[nodiscard]] std::string reach_json(const petri::InterlacedNet& n, const petri::ReachGraph& g);
[[nodiscard]] std::string deadlocks_json(const petri::InterlacedNet& n, const petri::ReachGraph& g,
                                         const analyze::DeadlockReport& r);
[[nodiscard]] std::string check_json(const petri::InterlacedNet& n, const petri::ReachGraph& g,
                                     const std::vector<FormulaOutcome>& outcomes);

}  // namespace hashnets::interop
