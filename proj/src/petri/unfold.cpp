#include <algorithm>
#include <map>
#include <numeric>

#include "hashnets/petri/net.hpp"

namespace hashnets::petri {

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void join(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

template <class Node>
DisjointSets classes_of(const std::vector<Node>& nodes) {
    DisjointSets ds(nodes.size());
    std::map<Qualifier, std::size_t> first;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (const auto& q : nodes[i].qualifiers) {
            auto [it, fresh] = first.emplace(q, i);
            if (!fresh) ds.join(it->second, i);
        }
    }
    return ds;
}

// Class members grouped by representative, in order of first appearance.
std::vector<std::vector<std::size_t>> groups(DisjointSets& ds) {
    std::vector<std::vector<std::size_t>> out;
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t i = 0; i < ds.parent.size(); ++i) {
        auto r = ds.find(i);
        auto [it, fresh] = slot.emplace(r, out.size());
        if (fresh) out.emplace_back();
        out[it->second].push_back(i);
    }
    return out;
}

}  // namespace

InterlacedNet unfold(const InterlacedNet& n) {
    const auto& places = n.places();
    const auto& transitions = n.transitions();

    std::map<Qualifier, std::string> place_quals;
    for (const auto& p : places) {
        for (const auto& q : p.qualifiers) place_quals.emplace(q, p.id);
    }
    for (const auto& t : transitions) {
        for (const auto& q : t.qualifiers) {
            if (auto it = place_quals.find(q); it != place_quals.end()) {
                throw SortClash("place '" + it->second + "' and transition '" + t.id + "' share qualifier " +
                                to_string(q));
            }
        }
    }

    auto pds = classes_of(places);
    auto tds = classes_of(transitions);
    auto pgroups = groups(pds);
    auto tgroups = groups(tds);

    InterlacedNet out;
    std::vector<std::string> place_name(places.size());
    std::vector<std::string> transition_name(transitions.size());

    for (const auto& g : pgroups) {
        std::string id = places[g.front()].id;
        QualifierSet qs;
        unsigned initial = 0;
        for (auto i : g) {
            id = std::min(id, places[i].id);
            qs.insert(places[i].qualifiers.begin(), places[i].qualifiers.end());
            initial += n.initial(i);
        }
        for (auto i : g) place_name[i] = id;
        out.add_place(id, std::move(qs), initial);
    }
    for (const auto& g : tgroups) {
        std::string id = transitions[g.front()].id;
        QualifierSet qs;
        std::set<std::string> labels;
        for (auto i : g) {
            id = std::min(id, transitions[i].id);
            qs.insert(transitions[i].qualifiers.begin(), transitions[i].qualifiers.end());
            if (transitions[i].label) labels.insert(*transitions[i].label);
        }
        std::optional<std::string> label;
        for (const auto& l : labels) label = label ? *label + "|" + l : l;
        for (auto i : g) transition_name[i] = id;
        out.add_transition(id, std::move(label), std::move(qs));
    }
    // Each original arc is a distinct pre-image, so parallel images accumulate.
    for (const auto& a : n.arcs()) {
        if (a.from_place) {
            out.add_arc(place_name[a.place], transition_name[a.transition], a.weight);
        } else {
            out.add_arc(transition_name[a.transition], place_name[a.place], a.weight);
        }
    }
    if (n.final_predicate()) {
        for (auto f : *n.final_predicate()) {
            if (auto p = n.find_place(f.place)) f.place = place_name[*p];
            out.add_final(std::move(f));
        }
    }
    return out;
}

InterlacedNet unfold(const std::vector<InterlacedNet>& slices) {
    InterlacedNet acc;
    for (const auto& s : slices) acc = unite(acc, s);
    return unfold(acc);
}

}  // namespace hashnets::petri
