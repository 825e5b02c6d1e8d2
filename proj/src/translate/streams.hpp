#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "builder.hpp"
#include "hashnets/behavior/stream.hpp"

namespace hashnets::translate::detail {

// Flag index i < n stands for eos(i); i == n stands for a data item.
[[nodiscard]] behavior::StreamKind kind_at(int index, int n);
[[nodiscard]] int index_of(behavior::StreamKind k, int n);

struct StreamVar {
    std::string id;
    int n = 0;
};

// One way of moving the flags of every variable to the transmitted kind.
struct KindVariant {
    std::string suffix;
    int kind = 0;
    ArcList pre;
    ArcList post;
};

// Variants for a transmission that sets all `vars` to the same kind; `fixed` pins the kind.
[[nodiscard]] std::vector<KindVariant> kind_variants(const std::vector<StreamVar>& vars, bool order,
                                                     std::optional<int> fixed = std::nullopt);

// Flag and dual places of one variable with their initial marking (data, not yet started).
void declare_stream_variable(Builder& b, const StreamVar& v, bool order);

// Every combination of current flags of `vars`, as (suffix, read arcs, flag index per var).
struct FlagAssignment {
    std::string suffix;
    ArcList reads;
    std::vector<int> index;
};
[[nodiscard]] std::vector<FlagAssignment> flag_assignments(const std::vector<StreamVar>& vars);

[[nodiscard]] std::string fresh_place(const std::string& var);
[[nodiscard]] std::string started_place(const std::string& var);
[[nodiscard]] std::string order_fail_place(const std::string& var);

}  // namespace hashnets::translate::detail
