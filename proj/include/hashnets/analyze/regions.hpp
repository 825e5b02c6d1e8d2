#pragma once

#include <string>
#include <vector>

#include "hashnets/ahcl/ast.hpp"
#include "hashnets/translate/translate.hpp"

namespace hashnets::analyze {

// Places of `unit`'s protocol where it holds the resource obtained through `get` and released
// through `put` (ports or groups): from completion of a get until a put is prepared. A resource
// whose first related activation is a put counts as held from the start.
[[nodiscard]] std::vector<std::string> possession_region(const ahcl::Unit& unit, const translate::UnitFlow& flow,
                                                         const std::string& get, const std::string& put);

}  // namespace hashnets::analyze
