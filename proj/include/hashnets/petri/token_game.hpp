#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hashnets/petri/net.hpp"

namespace hashnets::petri {

struct UnknownTransition : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotEnabled : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[nodiscard]] bool enabled(const InterlacedNet& n, const Marking& m, std::size_t t);
[[nodiscard]] bool enabled(const InterlacedNet& n, const Marking& m, const std::string& t);
[[nodiscard]] Marking fire(const InterlacedNet& n, const Marking& m, std::size_t t);
[[nodiscard]] Marking fire(const InterlacedNet& n, const Marking& m, const std::string& t);
// Transition indices in net order.
[[nodiscard]] std::vector<std::size_t> enabled_transitions(const InterlacedNet& n, const Marking& m);

// Name-keyed view of a marking, zero counts omitted.
[[nodiscard]] std::map<std::string, std::uint32_t> named(const InterlacedNet& n, const Marking& m);

}  // namespace hashnets::petri
