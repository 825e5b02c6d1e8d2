#include "hashnets/interop/pnml.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace hashnets::interop {

namespace pt = boost::property_tree;
using petri::InterlacedNet;

namespace {

const char* const tool = "hashnets";

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

void write_qualifiers(std::ostream& os, const petri::QualifierSet& qs, const std::string& indent) {
    for (const auto& q : qs) {
        os << indent << "<qualifier>";
        for (const auto& a : q) {
            if (const auto* n = std::get_if<long long>(&a)) {
                os << "<int>" << *n << "</int>";
            } else {
                os << "<str>" << escape(std::get<std::string>(a)) << "</str>";
            }
        }
        os << "</qualifier>\n";
    }
}

std::string text_of(const pt::ptree& node, const std::string& child) {
    auto c = node.get_child_optional(child);
    if (!c) return "";
    return c->get<std::string>("text", "");
}

unsigned number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &used);
    } catch (const std::exception&) {
        throw ParseError(what + " is not a non-negative integer: '" + s + "'");
    }
    if (used != s.size()) throw ParseError(what + " is not a non-negative integer: '" + s + "'");
    return static_cast<unsigned>(v);
}

std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const pt::ptree* tool_data(const pt::ptree& node) {
    for (const auto& [key, child] : node) {
        if (key == "toolspecific" && child.get<std::string>("<xmlattr>.tool", "") == tool) return &child;
    }
    return nullptr;
}

petri::QualifierSet read_qualifiers(const pt::ptree& data) {
    petri::QualifierSet qs;
    for (const auto& [key, q] : data) {
        if (key != "qualifier") continue;
        petri::Qualifier out;
        for (const auto& [k, atom] : q) {
            if (k == "int") {
                try {
                    out.emplace_back(std::stoll(atom.data()));
                } catch (const std::exception&) {
                    throw ParseError("bad integer qualifier atom '" + atom.data() + "'");
                }
            } else if (k == "str") {
                out.emplace_back(atom.data());
            }
        }
        qs.insert(std::move(out));
    }
    return qs;
}

struct Collected {
    std::vector<const pt::ptree*> places, transitions, arcs;
};

void collect(const pt::ptree& container, Collected& c) {
    for (const auto& [key, child] : container) {
        if (key == "place") c.places.push_back(&child);
        if (key == "transition") c.transitions.push_back(&child);
        if (key == "arc") c.arcs.push_back(&child);
        if (key == "page") collect(child, c);
    }
}

}  // namespace

std::string export_pnml(const InterlacedNet& n, const std::string& name) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n";
    os << "  <net id=\"net\" type=\"" << ptnet_type << "\">\n";
    os << "    <name><text>" << escape(name) << "</text></name>\n";
    os << "    <page id=\"page\">\n";
    for (std::size_t i = 0; i < n.places().size(); ++i) {
        const auto& p = n.places()[i];
        os << "      <place id=\"p" << i << "\">\n";
        os << "        <name><text>" << escape(p.id) << "</text></name>\n";
        if (n.initial(i)) os << "        <initialMarking><text>" << n.initial(i) << "</text></initialMarking>\n";
        os << "        <toolspecific tool=\"" << tool << "\" version=\"1\">\n";
        os << "          <id>" << escape(p.id) << "</id>\n";
        write_qualifiers(os, p.qualifiers, "          ");
        os << "        </toolspecific>\n";
        os << "      </place>\n";
    }
    for (std::size_t i = 0; i < n.transitions().size(); ++i) {
        const auto& t = n.transitions()[i];
        os << "      <transition id=\"t" << i << "\">\n";
        os << "        <name><text>" << escape(t.label.value_or("")) << "</text></name>\n";
        os << "        <toolspecific tool=\"" << tool << "\" version=\"1\">\n";
        os << "          <id>" << escape(t.id) << "</id>\n";
        if (t.label) {
            os << "          <label>" << escape(*t.label) << "</label>\n";
        } else {
            os << "          <silent/>\n";
        }
        write_qualifiers(os, t.qualifiers, "          ");
        os << "        </toolspecific>\n";
        os << "      </transition>\n";
    }
    // Arcs in a canonical order so equal nets export identical documents.
    std::vector<std::size_t> order(n.arcs().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto& a = n.arcs()[x];
        const auto& b = n.arcs()[y];
        return std::make_tuple(!a.from_place, a.place, a.transition) <
               std::make_tuple(!b.from_place, b.place, b.transition);
    });
    std::size_t k = 0;
    for (std::size_t i : order) {
        const auto& a = n.arcs()[i];
        std::string p = "p" + std::to_string(a.place);
        std::string t = "t" + std::to_string(a.transition);
        os << "      <arc id=\"a" << k++ << "\" source=\"" << (a.from_place ? p : t) << "\" target=\""
           << (a.from_place ? t : p) << "\">";
        if (a.weight != 1) os << "<inscription><text>" << a.weight << "</text></inscription>";
        os << "</arc>\n";
    }
    os << "    </page>\n";
    if (n.final_predicate()) {
        os << "    <toolspecific tool=\"" << tool << "\" version=\"1\">\n";
        os << "      <final>\n";
        for (const auto& f : *n.final_predicate()) {
            os << "        <atom place=\"" << escape(f.place) << "\" op=\""
               << (f.op == petri::FinalOp::eq ? "eq" : "ge") << "\" count=\"" << f.count << "\"/>\n";
        }
        os << "      </final>\n";
        os << "    </toolspecific>\n";
    }
    os << "  </net>\n";
    os << "</pnml>\n";
    return os.str();
}

InterlacedNet import_pnml(const std::string& xml) {
    pt::ptree doc;
    std::istringstream in(xml);
    try {
        pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(std::string("malformed XML: ") + e.what());
    }
    auto root = doc.get_child_optional("pnml");
    if (!root) throw ParseError("missing <pnml> root element");
    auto net_it = root->find("net");
    if (net_it == root->not_found()) throw ParseError("document contains no <net>");
    const pt::ptree& net = net_it->second;
    std::string type = net.get<std::string>("<xmlattr>.type", "");
    if (type != ptnet_type) throw UnsupportedNetType("net type '" + type + "' is not a P/T net");

    Collected c;
    collect(net, c);
    InterlacedNet out;
    std::map<std::string, std::string> ids;  // xml id -> node id
    auto xml_id = [](const pt::ptree& node, const char* what) {
        auto id = node.get<std::string>("<xmlattr>.id", "");
        if (id.empty()) throw ParseError(std::string(what) + " without id");
        return id;
    };
    for (const auto* p : c.places) {
        std::string xid = xml_id(*p, "place");
        const pt::ptree* data = tool_data(*p);
        std::string id = data ? data->get<std::string>("id", xid) : xid;
        std::string init = trim(text_of(*p, "initialMarking"));
        unsigned tokens = init.empty() ? 0 : number(init, "initial marking of " + xid);
        if (!ids.emplace(xid, id).second) throw ParseError("duplicate node id '" + xid + "'");
        try {
            out.add_place(id, data ? read_qualifiers(*data) : petri::QualifierSet{}, tokens);
        } catch (const petri::SortClash& e) {
            throw ParseError(e.what());
        }
    }
    for (const auto* t : c.transitions) {
        std::string xid = xml_id(*t, "transition");
        const pt::ptree* data = tool_data(*t);
        std::string id = data ? data->get<std::string>("id", xid) : xid;
        std::optional<std::string> label;
        if (data) {
            if (auto l = data->get_optional<std::string>("label")) label = *l;
        } else {
            std::string name = trim(text_of(*t, "name"));
            if (!name.empty()) label = name;
        }
        if (!ids.emplace(xid, id).second) throw ParseError("duplicate node id '" + xid + "'");
        try {
            out.add_transition(id, label, data ? read_qualifiers(*data) : petri::QualifierSet{});
        } catch (const std::runtime_error& e) {
            throw ParseError(e.what());
        }
    }
    for (const auto* a : c.arcs) {
        std::string src = a->get<std::string>("<xmlattr>.source", "");
        std::string dst = a->get<std::string>("<xmlattr>.target", "");
        auto s = ids.find(src);
        auto d = ids.find(dst);
        if (s == ids.end() || d == ids.end()) throw ParseError("arc between unknown nodes '" + src + "' and '" + dst + "'");
        std::string w = trim(text_of(*a, "inscription"));
        unsigned weight = w.empty() ? 1 : number(w, "arc weight");
        if (weight == 0) throw ParseError("arc weight must be positive");
        try {
            out.add_arc(s->second, d->second, weight);
        } catch (const petri::UnknownNode& e) {
            throw ParseError(std::string("arc must join a place and a transition: ") + e.what());
        }
    }
    if (const pt::ptree* data = tool_data(net)) {
        if (auto fin = data->get_child_optional("final")) {
            bool any = false;
            for (const auto& [key, atom] : *fin) {
                if (key != "atom") continue;
                petri::FinalAtom f;
                f.place = atom.get<std::string>("<xmlattr>.place", "");
                std::string op = atom.get<std::string>("<xmlattr>.op", "ge");
                if (op != "eq" && op != "ge") throw ParseError("unknown final-marking operator '" + op + "'");
                f.op = op == "eq" ? petri::FinalOp::eq : petri::FinalOp::ge;
                f.count = number(atom.get<std::string>("<xmlattr>.count", "1"), "final-marking count");
                out.add_final(f);
                any = true;
            }
            if (!any) throw ParseError("empty final-marking predicate");
        }
    }
    return out;
}

namespace {

// Bipartite net as one graph: places first, then transitions.
struct Graph {
    std::size_t places = 0;
    std::vector<std::vector<std::tuple<int, unsigned, std::size_t>>> adj;  // (direction, weight, neighbour)
    std::vector<std::string> base;                                         // sort, label, marking, final atoms
};

Graph graph_of(const InterlacedNet& n) {
    Graph g;
    g.places = n.places().size();
    std::size_t size = g.places + n.transitions().size();
    g.adj.resize(size);
    g.base.resize(size);
    std::map<std::string, std::string> finals;
    if (n.final_predicate()) {
        for (const auto& f : *n.final_predicate()) {
            finals[f.place] += (f.op == petri::FinalOp::eq ? "=" : ">=") + std::to_string(f.count) + ";";
        }
    }
    for (std::size_t i = 0; i < g.places; ++i) {
        g.base[i] = "P" + std::to_string(n.initial(i)) + "|" + finals[n.places()[i].id];
    }
    for (std::size_t i = 0; i < n.transitions().size(); ++i) {
        const auto& l = n.transitions()[i].label;
        g.base[g.places + i] = l ? "T+" + *l : std::string("T-");
    }
    for (const auto& a : n.arcs()) {
        std::size_t t = g.places + a.transition;
        g.adj[a.place].emplace_back(a.from_place ? 0 : 1, a.weight, t);
        g.adj[t].emplace_back(a.from_place ? 1 : 0, a.weight, a.place);
    }
    return g;
}

using Colors = std::vector<std::size_t>;

// Joint colour refinement; false when the colour histograms of the two graphs differ.
bool refine(const Graph& ga, const Graph& gb, Colors& ca, Colors& cb) {
    std::size_t classes = 0;
    for (;;) {
        using Sig = std::pair<std::size_t, std::vector<std::tuple<int, unsigned, std::size_t>>>;
        auto sigs = [](const Graph& g, const Colors& c) {
            std::vector<Sig> out(c.size());
            for (std::size_t v = 0; v < c.size(); ++v) {
                out[v].first = c[v];
                for (const auto& [d, w, u] : g.adj[v]) out[v].second.emplace_back(d, w, c[u]);
                std::sort(out[v].second.begin(), out[v].second.end());
            }
            return out;
        };
        auto sa = sigs(ga, ca);
        auto sb = sigs(gb, cb);
        std::map<Sig, std::size_t> ids;
        for (const auto& s : sa) ids.emplace(s, 0);
        for (const auto& s : sb) ids.emplace(s, 0);
        std::size_t next = 0;
        for (auto& [s, id] : ids) id = next++;
        std::map<std::size_t, long> balance;
        for (std::size_t v = 0; v < sa.size(); ++v) ++balance[ca[v] = ids[sa[v]]];
        for (std::size_t v = 0; v < sb.size(); ++v) --balance[cb[v] = ids[sb[v]]];
        for (const auto& [c, b] : balance) {
            if (b != 0) return false;
        }
        if (ids.size() == classes) return true;
        classes = ids.size();
    }
}

bool verify(const InterlacedNet& a, const InterlacedNet& b, const Graph& ga, const Colors& ca, const Colors& cb) {
    std::map<std::size_t, std::size_t> of_color;
    for (std::size_t v = 0; v < cb.size(); ++v) of_color[cb[v]] = v;
    std::vector<std::size_t> f(ca.size());
    for (std::size_t v = 0; v < ca.size(); ++v) f[v] = of_color.at(ca[v]);
    std::set<std::tuple<bool, std::size_t, std::size_t, unsigned>> arcs_b;
    for (const auto& x : b.arcs()) arcs_b.emplace(x.from_place, x.place, x.transition, x.weight);
    for (const auto& x : a.arcs()) {
        std::size_t p = f[x.place];
        std::size_t t = f[ga.places + x.transition];
        if (p >= ga.places || t < ga.places) return false;
        if (!arcs_b.count({x.from_place, p, t - ga.places, x.weight})) return false;
    }
    for (std::size_t i = 0; i < a.places().size(); ++i) {
        if (a.initial(i) != b.initial(f[i])) return false;
    }
    for (std::size_t i = 0; i < a.transitions().size(); ++i) {
        if (a.transitions()[i].label != b.transitions()[f[ga.places + i] - ga.places].label) return false;
    }
    return true;
}

bool search(const InterlacedNet& a, const InterlacedNet& b, const Graph& ga, const Graph& gb, Colors ca,
            Colors cb) {
    if (!refine(ga, gb, ca, cb)) return false;
    std::map<std::size_t, std::vector<std::size_t>> classes;
    for (std::size_t v = 0; v < ca.size(); ++v) classes[ca[v]].push_back(v);
    const std::vector<std::size_t>* pick = nullptr;
    for (const auto& [c, members] : classes) {
        if (members.size() > 1 && (!pick || members.size() < pick->size())) pick = &members;
    }
    if (!pick) return verify(a, b, ga, ca, cb);
    std::size_t v = pick->front();
    std::size_t fresh = *std::max_element(ca.begin(), ca.end()) + 1;
    for (std::size_t w = 0; w < cb.size(); ++w) {
        if (cb[w] != ca[v]) continue;
        Colors na = ca, nb = cb;
        na[v] = fresh;
        nb[w] = fresh;
        if (search(a, b, ga, gb, std::move(na), std::move(nb))) return true;
    }
    return false;
}

}  // namespace

bool isomorphic(const InterlacedNet& a, const InterlacedNet& b) {
    if (a.places().size() != b.places().size() || a.transitions().size() != b.transitions().size() ||
        a.arcs().size() != b.arcs().size() || a.final_predicate().has_value() != b.final_predicate().has_value()) {
        return false;
    }
    if (a.final_predicate() && a.final_predicate()->size() != b.final_predicate()->size()) return false;
    Graph ga = graph_of(a);
    Graph gb = graph_of(b);
    std::map<std::string, std::size_t> ids;
    for (const auto& s : ga.base) ids.emplace(s, 0);
    for (const auto& s : gb.base) ids.emplace(s, 0);
    std::size_t next = 0;
    for (auto& [s, id] : ids) id = next++;
    Colors ca(ga.base.size()), cb(gb.base.size());
    for (std::size_t v = 0; v < ca.size(); ++v) ca[v] = ids[ga.base[v]];
    for (std::size_t v = 0; v < cb.size(); ++v) cb[v] = ids[gb.base[v]];
    return search(a, b, ga, gb, std::move(ca), std::move(cb));
}

}  // namespace hashnets::interop
