#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hashnets/analyze/formula.hpp"

namespace hashnets::analyze::detail {

using Value = std::variant<long long, std::string>;

[[nodiscard]] std::string text(const Value& v);

// nullopt when `name` is not a built-in macro.
[[nodiscard]] std::optional<CtlPtr> builtin(const std::string& name, const std::vector<Value>& args,
                                            const ModelContext& ctx);

}  // namespace hashnets::analyze::detail
