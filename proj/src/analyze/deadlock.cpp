#include "hashnets/analyze/deadlock.hpp"

#include <stdexcept>

namespace hashnets::analyze {

DeadlockReport find_deadlocks(const petri::InterlacedNet& n, const petri::ReachGraph& g) {
    DeadlockReport r;
    r.truncated = g.truncated;
    for (std::uint32_t s = 0; s < g.size(); ++s) {
        bool fin = n.is_final(g.marking(s));
        if (fin) ++r.final_states;
        if (!g.expanded(s) || !g.edges(s).empty() || fin) continue;
        r.dead.push_back({s, g.path_to(s)});
    }
    return r;
}

std::optional<InvariantViolation> check_invariants(const petri::InterlacedNet& n, const petri::ReachGraph& g,
                                                   const std::vector<PlaceInvariant>& invs) {
    struct Compiled {
        const PlaceInvariant* inv;
        std::vector<std::pair<std::size_t, long long>> terms;
    };
    std::vector<Compiled> cs;
    for (const auto& inv : invs) {
        Compiled c{&inv, {}};
        for (const auto& [place, w] : inv.weights) {
            auto p = n.find_place(place);
            if (!p) throw std::invalid_argument("invariant '" + inv.name + "' names unknown place '" + place + "'");
            c.terms.emplace_back(*p, w);
        }
        cs.push_back(std::move(c));
    }
    for (std::uint32_t s = 0; s < g.size(); ++s) {
        for (const auto& c : cs) {
            long long sum = 0;
            for (const auto& [p, w] : c.terms) sum += w * static_cast<long long>(g.tokens(s, p));
            if (sum != c.inv->value) return InvariantViolation{c.inv->name, s, sum};
        }
    }
    return std::nullopt;
}

std::vector<PlaceInvariant> stream_invariants(const petri::InterlacedNet& n) {
    const std::string flag = "stream_port_flag[";
    const std::string dual = "stream_port_flag_dual[";
    std::map<std::string, PlaceInvariant> per_var;
    std::vector<PlaceInvariant> out;
    for (const auto& p : n.places()) {
        if (p.id.rfind(flag, 0) != 0 || p.id.back() != ']') continue;
        std::string inner = p.id.substr(flag.size(), p.id.size() - flag.size() - 1);
        auto comma = inner.rfind(',');
        if (comma == std::string::npos) continue;
        std::string var = inner.substr(0, comma);
        auto& inv = per_var[var];
        inv.name = "one flag set for " + var;
        inv.value = 1;
        inv.weights[p.id] = 1;
        std::string d = dual + inner + "]";
        if (n.find_place(d)) out.push_back({{{p.id, 1}, {d, 1}}, 1, p.id + " + dual = 1"});
    }
    for (auto& [var, inv] : per_var) out.push_back(std::move(inv));
    return out;
}

}  // namespace hashnets::analyze
