#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hashnets/ahcl/ast.hpp"
#include "hashnets/behavior/stream.hpp"

namespace hashnets::behavior {

// Symbols are "unit.port!" / "unit.port?" and "do(unit.port)".
using Trace = std::vector<std::string>;

struct TraceSet {
    std::set<Trace> complete;
    std::set<Trace> prefixes;  // every word reachable within the bound, including complete ones
};

using Scripts = std::map<std::string, std::vector<StreamKind>>;

// How stream predicates obtain their inputs.
enum class KindSource {
    scripts,        // each activation of a predicate port consumes the next scripted kind
    free,           // each activation of a stream port may carry any kind
    nondeterministic  // predicates ignore streams and may take either branch
};

struct TraceOptions {
    KindSource source = KindSource::scripts;
    bool order_consistency = false;  // with `free`: only kinds allowed by valid_successors
    NeverActivated never_activated = NeverActivated::as_false;
    std::size_t max_states = 2'000'000;
};

struct ScriptExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[nodiscard]] TraceSet enumerate_traces(const ahcl::Unit& u, const Scripts& scripts, int max_len,
                                        const TraceOptions& opt = {});

// {"port": ["DATA", "EOS2", "EOS0"], ...}; throws std::invalid_argument.
[[nodiscard]] Scripts parse_scripts(const std::string& json_text);

}  // namespace hashnets::behavior
