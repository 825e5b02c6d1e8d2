#pragma once

#include <string>
#include <string_view>

#include "hashnets/ahcl/ast.hpp"
#include "hashnets/ahcl/diagnostic.hpp"

namespace hashnets::ahcl {

// Throws SyntaxError or DuplicateIdentifier; never anything else for bad input.
[[nodiscard]] Component parse_configuration(std::string_view text);

// Canonical text that parses back to an equal Component.
[[nodiscard]] std::string print_configuration(const Component& c);
[[nodiscard]] std::string print_action(const behavior::Action& a);
[[nodiscard]] std::string print_predicate(const behavior::StreamPredicate& p);

[[nodiscard]] ValidationReport validate_configuration(const Component& c);

}  // namespace hashnets::ahcl
