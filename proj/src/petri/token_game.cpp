#include "hashnets/petri/token_game.hpp"

namespace hashnets::petri {

namespace {

std::size_t index_of(const InterlacedNet& n, const std::string& t) {
    auto i = n.find_transition(t);
    if (!i) throw UnknownTransition("unknown transition '" + t + "'");
    return *i;
}

}  // namespace

bool enabled(const InterlacedNet& n, const Marking& m, std::size_t t) {
    if (t >= n.transitions().size()) throw UnknownTransition("transition index " + std::to_string(t));
    for (const auto& [p, w] : n.pre(t)) {
        if (m[p] < w) return false;
    }
    return true;
}

bool enabled(const InterlacedNet& n, const Marking& m, const std::string& t) {
    return enabled(n, m, index_of(n, t));
}

Marking fire(const InterlacedNet& n, const Marking& m, std::size_t t) {
    if (!enabled(n, m, t)) throw NotEnabled("transition '" + n.transitions()[t].id + "' is not enabled");
    Marking out = m;
    for (const auto& [p, w] : n.pre(t)) out[p] -= w;
    for (const auto& [p, w] : n.post(t)) out[p] += w;
    return out;
}

Marking fire(const InterlacedNet& n, const Marking& m, const std::string& t) { return fire(n, m, index_of(n, t)); }

std::vector<std::size_t> enabled_transitions(const InterlacedNet& n, const Marking& m) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < n.transitions().size(); ++t) {
        if (enabled(n, m, t)) out.push_back(t);
    }
    return out;
}

std::map<std::string, std::uint32_t> named(const InterlacedNet& n, const Marking& m) {
    std::map<std::string, std::uint32_t> out;
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (m[p]) out.emplace(n.places()[p].id, m[p]);
    }
    return out;
}

}  // namespace hashnets::petri
