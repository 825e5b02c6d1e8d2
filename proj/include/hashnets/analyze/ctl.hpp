#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hashnets/petri/reach.hpp"

namespace hashnets::analyze {

enum class CtlOp { tt, ff, ge, eq, dead, not_, and_, or_, implies, EX, AX, EF, AF, EG, AG, EU, AU };

struct Ctl;
using CtlPtr = std::shared_ptr<const Ctl>;

struct Ctl {
    CtlOp op = CtlOp::tt;
    std::size_t node = 0;  // place (ge/eq) or transition (dead) index
    std::string name;      // node id, for printing
    unsigned count = 0;
    std::vector<CtlPtr> kids;
};

[[nodiscard]] CtlPtr ctl_const(bool v);
[[nodiscard]] CtlPtr ctl_place(const petri::InterlacedNet& n, const std::string& place, CtlOp op = CtlOp::ge,
                               unsigned count = 1);
[[nodiscard]] CtlPtr ctl_dead(const petri::InterlacedNet& n, const std::string& transition);
[[nodiscard]] CtlPtr ctl_unary(CtlOp op, CtlPtr f);
[[nodiscard]] CtlPtr ctl_binary(CtlOp op, CtlPtr a, CtlPtr b);
// Folds with and/or; empty lists give true/false respectively.
[[nodiscard]] CtlPtr ctl_all(std::vector<CtlPtr> fs);
[[nodiscard]] CtlPtr ctl_any(std::vector<CtlPtr> fs);

[[nodiscard]] std::string to_string(const Ctl& f);

enum class Verdict { true_, false_, unknown };
[[nodiscard]] const char* to_string(Verdict v);

struct CtlResult {
    Verdict verdict = Verdict::unknown;
    // Transitions fired from the initial state: witness for a true existential verdict or
    // counterexample for a false universal one.
    std::vector<std::uint32_t> path;
    // The lasso returns to the state reached after this many steps, if the path is infinite.
    std::optional<std::size_t> loop_start;
    std::size_t satisfying_states = 0;
};

struct TruncatedGraph : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-state truth values; dead states end maximal finite paths (AX holds vacuously there).
[[nodiscard]] std::vector<bool> label(const petri::InterlacedNet& n, const petri::ReachGraph& g, const Ctl& f);

// On a truncated graph `strict` throws; otherwise only verdicts settled by a path are kept.
[[nodiscard]] CtlResult check_ctl(const petri::InterlacedNet& n, const petri::ReachGraph& g, const Ctl& f,
                                  bool strict = false);

}  // namespace hashnets::analyze
