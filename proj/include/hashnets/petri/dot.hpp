#pragma once

#include <string>

#include "hashnets/petri/reach.hpp"

namespace hashnets::petri {

[[nodiscard]] std::string net_to_dot(const InterlacedNet& n);
// Nodes show their non-empty places; edges show transition ids and labels.
[[nodiscard]] std::string reach_to_dot(const InterlacedNet& n, const ReachGraph& g);

}  // namespace hashnets::petri
