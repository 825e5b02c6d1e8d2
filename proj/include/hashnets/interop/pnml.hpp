#pragma once

#include <stdexcept>
#include <string>

#include "hashnets/petri/net.hpp"

namespace hashnets::interop {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedNetType : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* ptnet_type = "http://www.pnml.org/version-2009/grammar/ptnet";

// ISO P/T-net grammar. Node ids are rewritten to p<i>/t<i>; original ids, labels, qualifiers and the
// final predicate travel in <toolspecific tool="hashnets">. Silent transitions get an empty name.
[[nodiscard]] std::string export_pnml(const petri::InterlacedNet& n, const std::string& name = "net");

// Reads the first net of a PNML document. Nodes without hashnets tool data keep their XML id;
// a transition's name becomes its label (empty name: silent).
[[nodiscard]] petri::InterlacedNet import_pnml(const std::string& xml);

// Same node counts, a bijection preserving ids, labels, initial marking, arcs with weights and the
// final predicate.
[[nodiscard]] bool isomorphic(const petri::InterlacedNet& a, const petri::InterlacedNet& b);

}  // namespace hashnets::interop
