#include "hashnets/petri/net.hpp"

#include <algorithm>

namespace hashnets::petri {

std::string to_string(const Qualifier& q) {
    std::string s = "(";
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i) s += ",";
        if (const auto* n = std::get_if<long long>(&q[i])) {
            s += std::to_string(*n);
        } else {
            s += std::get<std::string>(q[i]);
        }
    }
    return s + ")";
}

std::size_t InterlacedNet::add_place(const std::string& id, QualifierSet q, unsigned initial) {
    if (transition_ids_.count(id)) throw SortClash("id '" + id + "' is already a transition");
    touch();
    auto it = place_ids_.find(id);
    if (it != place_ids_.end()) {
        places_[it->second].qualifiers.merge(q);
        initial_[it->second] += initial;
        return it->second;
    }
    std::size_t idx = places_.size();
    places_.push_back({id, std::move(q)});
    initial_.push_back(initial);
    place_ids_.emplace(id, idx);
    return idx;
}

std::size_t InterlacedNet::add_transition(const std::string& id, std::optional<std::string> label,
                                          QualifierSet q) {
    if (place_ids_.count(id)) throw SortClash("id '" + id + "' is already a place");
    touch();
    auto it = transition_ids_.find(id);
    if (it != transition_ids_.end()) {
        Transition& t = transitions_[it->second];
        if (label && t.label && *label != *t.label) {
            throw LabelConflict("transition '" + id + "' labelled both '" + *t.label + "' and '" + *label + "'");
        }
        if (label) t.label = label;
        t.qualifiers.merge(q);
        return it->second;
    }
    std::size_t idx = transitions_.size();
    transitions_.push_back({id, std::move(q), std::move(label)});
    transition_ids_.emplace(id, idx);
    return idx;
}

void InterlacedNet::add_arc(const std::string& from, const std::string& to, unsigned weight) {
    if (weight == 0) throw std::invalid_argument("arc weight must be positive");
    Arc a;
    a.weight = weight;
    if (auto p = place_ids_.find(from); p != place_ids_.end()) {
        auto t = transition_ids_.find(to);
        if (t == transition_ids_.end()) throw UnknownNode("arc target '" + to + "' is not a transition");
        a.from_place = true;
        a.place = p->second;
        a.transition = t->second;
    } else if (auto t = transition_ids_.find(from); t != transition_ids_.end()) {
        auto p2 = place_ids_.find(to);
        if (p2 == place_ids_.end()) throw UnknownNode("arc target '" + to + "' is not a place");
        a.from_place = false;
        a.place = p2->second;
        a.transition = t->second;
    } else {
        throw UnknownNode("arc source '" + from + "' does not exist");
    }
    touch();
    auto key = std::make_tuple(a.from_place, a.place, a.transition);
    if (auto it = arc_ids_.find(key); it != arc_ids_.end()) {
        arcs_[it->second].weight += weight;
        return;
    }
    arc_ids_.emplace(key, arcs_.size());
    arcs_.push_back(a);
}

void InterlacedNet::set_initial(const std::string& place, unsigned count) {
    auto it = place_ids_.find(place);
    if (it == place_ids_.end()) throw UnknownNode("unknown place '" + place + "'");
    initial_[it->second] = count;
}

void InterlacedNet::add_final(FinalAtom atom) {
    if (!final_) final_.emplace();
    if (std::find(final_->begin(), final_->end(), atom) == final_->end()) final_->push_back(std::move(atom));
}

std::optional<std::size_t> InterlacedNet::place_index(const std::string& id) const {
    auto it = place_ids_.find(id);
    if (it == place_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> InterlacedNet::transition_index(const std::string& id) const {
    auto it = transition_ids_.find(id);
    if (it == transition_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> InterlacedNet::find_place(const std::string& name) const {
    if (auto i = place_index(name)) return i;
    compile();
    auto it = place_aliases_.find(name);
    if (it == place_aliases_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> InterlacedNet::find_transition(const std::string& name) const {
    if (auto i = transition_index(name)) return i;
    compile();
    auto it = transition_aliases_.find(name);
    if (it == transition_aliases_.end()) return std::nullopt;
    return it->second;
}

Marking InterlacedNet::initial_marking() const { return Marking(initial_.begin(), initial_.end()); }

unsigned InterlacedNet::initial(std::size_t place) const { return initial_.at(place); }

bool InterlacedNet::is_final(const Marking& m) const {
    if (!final_) return false;
    for (const auto& a : *final_) {
        auto p = find_place(a.place);
        std::uint32_t v = p ? m[*p] : 0;
        if (a.op == FinalOp::eq ? v != a.count : v < a.count) return false;
    }
    return true;
}

const std::vector<std::pair<std::size_t, unsigned>>& InterlacedNet::pre(std::size_t t) const {
    compile();
    return pre_.at(t);
}

const std::vector<std::pair<std::size_t, unsigned>>& InterlacedNet::post(std::size_t t) const {
    compile();
    return post_.at(t);
}

void InterlacedNet::compile() const {
    if (compiled_) return;
    pre_.assign(transitions_.size(), {});
    post_.assign(transitions_.size(), {});
    for (const auto& a : arcs_) {
        auto& list = a.from_place ? pre_[a.transition] : post_[a.transition];
        list.emplace_back(a.place, a.weight);
    }
    for (auto& l : pre_) std::sort(l.begin(), l.end());
    for (auto& l : post_) std::sort(l.begin(), l.end());
    place_aliases_.clear();
    transition_aliases_.clear();
    auto alias = [](const QualifierSet& qs, std::size_t idx, auto& table) {
        for (const auto& q : qs) {
            if (q.size() == 2 && std::holds_alternative<std::string>(q[0]) &&
                std::get<std::string>(q[0]) == "node" && std::holds_alternative<std::string>(q[1])) {
                table.emplace(std::get<std::string>(q[1]), idx);
            }
        }
    };
    for (std::size_t i = 0; i < places_.size(); ++i) alias(places_[i].qualifiers, i, place_aliases_);
    for (std::size_t i = 0; i < transitions_.size(); ++i) alias(transitions_[i].qualifiers, i, transition_aliases_);
    compiled_ = true;
}

bool InterlacedNet::operator==(const InterlacedNet& o) const {
    if (places_.size() != o.places_.size() || transitions_.size() != o.transitions_.size() ||
        arcs_.size() != o.arcs_.size() || initial_ != o.initial_) {
        return false;
    }
    for (std::size_t i = 0; i < places_.size(); ++i) {
        if (places_[i].id != o.places_[i].id || places_[i].qualifiers != o.places_[i].qualifiers) return false;
    }
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        const auto& a = transitions_[i];
        const auto& b = o.transitions_[i];
        if (a.id != b.id || a.qualifiers != b.qualifiers || a.label != b.label) return false;
    }
    auto key = [](const InterlacedNet& n) {
        std::set<std::tuple<bool, std::size_t, std::size_t, unsigned>> s;
        for (const auto& a : n.arcs_) s.emplace(a.from_place, a.place, a.transition, a.weight);
        return s;
    };
    if (key(*this) != key(o)) return false;
    auto fin = [](const InterlacedNet& n) {
        std::set<FinalAtom> s;
        if (n.final_) s.insert(n.final_->begin(), n.final_->end());
        return std::make_pair(n.final_.has_value(), s);
    };
    return fin(*this) == fin(o);
}

InterlacedNet unite(const InterlacedNet& a, const InterlacedNet& b) {
    InterlacedNet out;
    for (const auto* n : {&a, &b}) {
        for (std::size_t i = 0; i < n->places().size(); ++i) {
            const auto& p = n->places()[i];
            out.add_place(p.id, p.qualifiers, n->initial(i));
        }
        for (const auto& t : n->transitions()) out.add_transition(t.id, t.label, t.qualifiers);
    }
    // Arcs present in both operands with the same weight count once.
    std::map<std::tuple<bool, std::string, std::string>, unsigned> seen;
    for (const auto* n : {&a, &b}) {
        std::map<std::tuple<bool, std::string, std::string>, unsigned> mine;
        for (const auto& arc : n->arcs()) {
            mine[{arc.from_place, n->places()[arc.place].id, n->transitions()[arc.transition].id}] += arc.weight;
        }
        for (const auto& [k, w] : mine) {
            auto it = seen.find(k);
            if (it != seen.end() && it->second == w) continue;
            seen[k] += w;
        }
    }
    for (const auto& [k, w] : seen) {
        const auto& [from_place, place, transition] = k;
        if (from_place) {
            out.add_arc(place, transition, w);
        } else {
            out.add_arc(transition, place, w);
        }
    }
    for (const auto* n : {&a, &b}) {
        if (n->final_predicate()) {
            for (const auto& f : *n->final_predicate()) out.add_final(f);
        }
    }
    return out;
}

}  // namespace hashnets::petri
