#include "builder.hpp"

namespace hashnets::translate::detail {

std::string node(const std::string& base, std::initializer_list<std::string> args) {
    std::string s = base + "[";
    bool first = true;
    for (const auto& a : args) {
        if (!first) s += ",";
        s += a;
        first = false;
    }
    return s + "]";
}

const std::string& Builder::place(const std::string& id, unsigned initial, petri::QualifierSet q) {
    q.insert({std::string("node"), id});
    auto i = net_.add_place(id, std::move(q), initial);
    return net_.places()[i].id;
}

const std::string& Builder::transition(const std::string& id, std::optional<std::string> label,
                                       petri::QualifierSet q) {
    q.insert({std::string("node"), id});
    auto i = net_.add_transition(id, std::move(label), std::move(q));
    return net_.transitions()[i].id;
}

void Builder::arc(const std::string& from, const std::string& to, unsigned weight) {
    net_.add_arc(from, to, weight);
}

void Builder::read(const std::string& place, const std::string& transition) {
    this->place(place);
    arc(place, transition);
    arc(transition, place);
}

void Builder::wire(const std::string& t, const ArcList& pre, const ArcList& post) {
    for (const auto& [p, w] : pre) {
        place(p);
        arc(p, t, w);
    }
    for (const auto& [p, w] : post) {
        place(p);
        arc(t, p, w);
    }
}

}  // namespace hashnets::translate::detail
