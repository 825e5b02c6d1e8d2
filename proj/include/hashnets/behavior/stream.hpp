#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hashnets/behavior/action.hpp"

namespace hashnets::behavior {

// Data item, or end-of-stream marker at a nesting level (0 = whole stream).
struct StreamKind {
    bool data = true;
    int level = 0;

    [[nodiscard]] static StreamKind value() { return {true, 0}; }
    [[nodiscard]] static StreamKind eos(int k) { return {false, k}; }

    auto operator<=>(const StreamKind&) const = default;
};

[[nodiscard]] std::string to_string(StreamKind k);
// Accepts "DATA" and "EOSk" (case-insensitive, optional space before k).
[[nodiscard]] std::optional<StreamKind> parse_kind(const std::string& text);

enum class TriBool { true_, false_, fail };
[[nodiscard]] const char* to_string(TriBool v);

// A nested list such as [[1],[5,6]]; leaves carry no payload.
struct ValueTree {
    bool leaf = false;
    std::vector<ValueTree> children;
};

// Throws std::invalid_argument on malformed input.
[[nodiscard]] ValueTree parse_value_tree(const std::string& text);

struct DepthExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Leaves at depth n emit data; each list at depth k is closed by eos(k).
[[nodiscard]] std::vector<StreamKind> stream_flatten(const ValueTree& tree, int n);

// Kinds allowed right after `k` on a port with nesting factor n (n >= 1).
[[nodiscard]] std::set<StreamKind> valid_successors(StreamKind k, int n);
// Kinds allowed as the very first value of a stream.
[[nodiscard]] std::set<StreamKind> valid_initial(int n);

struct UnknownPort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NeverActivated { as_false, as_fail };

// nullopt in `last` marks a port that has not been activated yet.
using LastKinds = std::map<std::string, std::optional<StreamKind>>;

// A variable holds when its last kind is eos(i) with i <= depth.
[[nodiscard]] TriBool evaluate_stream_predicate(const StreamPredicate& p, const LastKinds& last,
                                                int depth,
                                                NeverActivated policy = NeverActivated::as_false);

}  // namespace hashnets::behavior
