#include <sstream>

#include "hashnets/ahcl/parser.hpp"

namespace hashnets::ahcl {

using behavior::Action;
using behavior::ActionKind;

namespace {

// True when the printed form ends in a bare `repeat X` that would take a following `until`.
bool ends_open(const Action& a) {
    switch (a.kind) {
    case ActionKind::repeat_forever: return true;
    case ActionKind::repeat_counter: return ends_open(a.children[0]);
    case ActionKind::if_then_else: return ends_open(a.children[1]);
    default: return false;
    }
}

void print(std::ostream& os, const Action& a);

void print_list(std::ostream& os, const char* kw, const Action& a) {
    os << kw << " { ";
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (i) os << "; ";
        print(os, a.children[i]);
    }
    os << (a.children.empty() ? "}" : " }");
}

void print(std::ostream& os, const Action& a) {
    switch (a.kind) {
    case ActionKind::skip: os << "skip"; break;
    case ActionKind::seq: print_list(os, "seq", a); break;
    case ActionKind::par: print_list(os, "par", a); break;
    case ActionKind::alt: print_list(os, "alt", a); break;
    case ActionKind::repeat_until:
        os << "repeat ";
        if (ends_open(a.children[0])) {
            os << "(";
            print(os, a.children[0]);
            os << ")";
        } else {
            print(os, a.children[0]);
        }
        os << " until " << print_predicate(a.predicate);
        break;
    case ActionKind::repeat_counter:
        os << "repeat counter " << a.count << " ";
        print(os, a.children[0]);
        break;
    case ActionKind::repeat_forever:
        os << "repeat ";
        print(os, a.children[0]);
        break;
    case ActionKind::if_then_else:
        os << "if " << print_predicate(a.predicate) << " then ";
        print(os, a.children[0]);
        os << " else ";
        print(os, a.children[1]);
        break;
    case ActionKind::signal: os << "signal " << a.id; break;
    case ActionKind::wait: os << "wait " << a.id; break;
    case ActionKind::activate:
        os << a.id << (a.polarity == behavior::Polarity::send ? "!" : "?");
        break;
    case ActionKind::do_collective: os << "do " << a.id; break;
    }
}

void print_port(std::ostream& os, const Port& p, const std::string& indent) {
    os << indent << (p.collective ? "collective" : to_string(p.direction)) << " " << p.id;
    if (p.stream) os << " stream(" << p.nesting << ")";
    os << ";\n";
}

}  // namespace

std::string print_predicate(const behavior::StreamPredicate& p) {
    std::string out;
    for (std::size_t i = 0; i < p.disjuncts.size(); ++i) {
        const auto& c = p.disjuncts[i];
        if (i) out += " | ";
        if (c.bracketed) out += "<";
        for (std::size_t j = 0; j < c.ports.size(); ++j) {
            if (j) out += " & ";
            out += c.ports[j];
        }
        if (c.bracketed) out += ">";
    }
    return out;
}

std::string print_action(const Action& a) {
    std::ostringstream os;
    print(os, a);
    return os.str();
}

std::string print_configuration(const Component& c) {
    std::ostringstream os;
    os << "component " << c.name << " {\n";
    for (const auto& u : c.units) {
        os << "  unit " << u.id << (u.kind == UnitKind::repetitive ? " repetitive" : "") << " {\n";
        if (!u.ports.empty() || !u.groups.empty()) {
            os << "    ports {\n";
            for (const auto& p : u.ports) print_port(os, p, "      ");
            for (const auto& g : u.groups) {
                os << "      group " << g.id << " " << to_string(g.kind) << " {\n";
                for (const auto& m : g.members) print_port(os, m, "        ");
                os << "      }\n";
            }
            os << "    }\n";
        }
        if (!u.semaphores.empty()) {
            os << "    sem ";
            for (std::size_t i = 0; i < u.semaphores.size(); ++i) {
                os << (i ? ", " : "") << u.semaphores[i];
            }
            os << ";\n";
        }
        os << "    protocol { " << print_action(u.protocol) << " }\n";
        os << "  }\n";
    }
    for (const auto& ch : c.channels) {
        os << "  connect " << ch.id << ": " << ch.sender.str() << " -> " << ch.receiver.str() << " "
           << to_string(ch.mode);
        if (ch.capacity) os << " " << *ch.capacity;
        os << ";\n";
    }
    for (const auto& g : c.collectives) {
        os << "  collective " << g.id;
        if (g.nesting) os << " stream(" << *g.nesting << ")";
        os << " { ";
        for (std::size_t i = 0; i < g.members.size(); ++i) {
            os << (i ? ", " : "") << g.members[i].str();
        }
        os << " }\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace hashnets::ahcl
