#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hashnets/ahcl/ast.hpp"
#include "hashnets/petri/net.hpp"

namespace hashnets::translate {

struct TranslationOptions {
    bool with_stream_protocol = false;
    bool with_order_consistency = false;  // requires with_stream_protocol
    int buffer_default = 1;
};

struct UnboundPort : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnboundSemaphore : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ArityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Protocol structure with the places each action owns, for region-based queries.
struct ActionNode {
    behavior::ActionKind kind = behavior::ActionKind::skip;
    std::string id;  // port, group, semaphore or collective port
    behavior::Polarity polarity = behavior::Polarity::send;
    std::string label;  // "unit:n", n = pre-order index
    std::string start;
    std::string stop;
    std::vector<std::string> inner;  // places created by this action, excluding start/stop
    std::vector<ActionNode> children;
};

struct UnitFlow {
    std::string unit;
    bool repetitive = false;
    ActionNode root;
};

struct SliceSet {
    std::vector<std::pair<std::string, petri::InterlacedNet>> slices;
    std::vector<UnitFlow> flows;
};

struct Translation {
    petri::InterlacedNet net;
    std::vector<UnitFlow> flows;
};

// Per-concern slices before composition; node ids are shared where slices meet.
[[nodiscard]] SliceSet translate_slices(const ahcl::Component& c, const TranslationOptions& opt = {});
// Union and unfolding of all slices.
[[nodiscard]] Translation translate(const ahcl::Component& c, const TranslationOptions& opt = {});
[[nodiscard]] petri::InterlacedNet translate_component(const ahcl::Component& c,
                                                       const TranslationOptions& opt = {});

// Node naming helpers shared with the analysis layer.
[[nodiscard]] std::string port_name(const std::string& unit, const std::string& port);
[[nodiscard]] std::string stream_flag(const std::string& var, int index);
[[nodiscard]] std::string stream_flag_dual(const std::string& var, int index);
// Stream variable carrying the kinds of `port`: the port, its group, or its collective group.
[[nodiscard]] std::string stream_variable(const ahcl::Component& c, const std::string& unit,
                                          const std::string& port);

}  // namespace hashnets::translate
