#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hashnets/petri/reach.hpp"

namespace hashnets::analyze {

struct DeadState {
    std::uint32_t state = 0;
    std::vector<std::uint32_t> path;  // shortest firing path from the initial state
};

struct DeadlockReport {
    std::vector<DeadState> dead;  // non-final states without successors
    std::size_t final_states = 0;
    bool truncated = false;  // unexpanded states were not examined
};

[[nodiscard]] DeadlockReport find_deadlocks(const petri::InterlacedNet& n, const petri::ReachGraph& g);

// Weighted place sum that must stay constant, e.g. {{"a", 1}, {"b", 1}} == 1.
struct PlaceInvariant {
    std::map<std::string, long long> weights;
    long long value = 0;
    std::string name;
};

struct InvariantViolation {
    std::string invariant;
    std::uint32_t state = 0;
    long long actual = 0;
};

[[nodiscard]] std::optional<InvariantViolation> check_invariants(const petri::InterlacedNet& n,
                                                                 const petri::ReachGraph& g,
                                                                 const std::vector<PlaceInvariant>& invs);

// Exactly one flag per stream variable and flag + dual = 1, for every variable found in the net.
[[nodiscard]] std::vector<PlaceInvariant> stream_invariants(const petri::InterlacedNet& n);

}  // namespace hashnets::analyze
