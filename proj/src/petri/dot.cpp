#include "hashnets/petri/dot.hpp"

#include <sstream>

namespace hashnets::petri {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string edge_text(const InterlacedNet& n, std::uint32_t t) {
    const auto& tr = n.transitions()[t];
    return tr.label ? tr.id + " / " + *tr.label : tr.id;
}

}  // namespace

std::string net_to_dot(const InterlacedNet& n) {
    std::ostringstream os;
    os << "digraph net {\n  rankdir=LR;\n";
    for (std::size_t p = 0; p < n.places().size(); ++p) {
        std::string text = n.places()[p].id;
        if (n.initial(p)) text += " (" + std::to_string(n.initial(p)) + ")";
        os << "  p" << p << " [shape=circle, label=" << quote(text) << "];\n";
    }
    for (std::size_t t = 0; t < n.transitions().size(); ++t) {
        os << "  t" << t << " [shape=box, label=" << quote(edge_text(n, static_cast<std::uint32_t>(t))) << "];\n";
    }
    for (const auto& a : n.arcs()) {
        if (a.from_place) {
            os << "  p" << a.place << " -> t" << a.transition;
        } else {
            os << "  t" << a.transition << " -> p" << a.place;
        }
        if (a.weight != 1) os << " [label=\"" << a.weight << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string reach_to_dot(const InterlacedNet& n, const ReachGraph& g) {
    std::ostringstream os;
    os << "digraph reach {\n";
    for (StateId s = 0; s < g.size(); ++s) {
        auto m = g.marking(s);
        std::string text;
        for (std::size_t p = 0; p < m.size(); ++p) {
            if (!m[p]) continue;
            if (!text.empty()) text += "\n";
            text += n.places()[p].id;
            if (m[p] != 1) text += "=" + std::to_string(m[p]);
        }
        os << "  s" << s << " [label=" << quote(text.empty() ? "(empty)" : text);
        if (!g.expanded(s)) os << ", style=dashed";
        os << "];\n";
    }
    for (StateId s = 0; s < g.size(); ++s) {
        for (const auto& e : g.edges(s)) {
            os << "  s" << s << " -> s" << e.target << " [label=" << quote(edge_text(n, e.transition)) << "];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace hashnets::petri
