#include "hashnets/ahcl/ast.hpp"

#include <sstream>

#include "hashnets/ahcl/diagnostic.hpp"

namespace hashnets::ahcl {

const Port* Unit::find_port(const std::string& port_id) const {
    for (const auto& p : ports) {
        if (p.id == port_id) return &p;
    }
    for (const auto& g : groups) {
        for (const auto& m : g.members) {
            if (m.id == port_id) return &m;
        }
    }
    return nullptr;
}

const Group* Unit::find_group(const std::string& group_id) const {
    for (const auto& g : groups) {
        if (g.id == group_id) return &g;
    }
    return nullptr;
}

const Group* Unit::group_of(const std::string& port_id) const {
    for (const auto& g : groups) {
        for (const auto& m : g.members) {
            if (m.id == port_id) return &g;
        }
    }
    return nullptr;
}

std::vector<const Port*> Unit::all_ports() const {
    std::vector<const Port*> out;
    for (const auto& p : ports) out.push_back(&p);
    for (const auto& g : groups) {
        for (const auto& m : g.members) out.push_back(&m);
    }
    return out;
}

const Unit* Component::find_unit(const std::string& id) const {
    for (const auto& u : units) {
        if (u.id == id) return &u;
    }
    return nullptr;
}

const Port* Component::find_port(const PortRef& ref) const {
    const Unit* u = find_unit(ref.unit);
    return u ? u->find_port(ref.port) : nullptr;
}

const Channel* Component::find_channel(const std::string& id) const {
    for (const auto& c : channels) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

const CollectiveGroup* Component::collective_of(const PortRef& ref) const {
    for (const auto& g : collectives) {
        for (const auto& m : g.members) {
            if (m == ref) return &g;
        }
    }
    return nullptr;
}

const char* to_string(Direction d) { return d == Direction::input ? "in" : "out"; }
const char* to_string(GroupKind k) { return k == GroupKind::any ? "any" : "all"; }

const char* to_string(ChannelMode m) {
    switch (m) {
    case ChannelMode::synchronous: return "synchronous";
    case ChannelMode::buffered: return "buffered";
    case ChannelMode::ready: return "ready";
    }
    return "?";
}

std::string format(const Diagnostic& d, const std::string& file) {
    std::ostringstream os;
    os << file << ':' << d.span.line << ':' << d.span.column << ": "
       << (d.severity == Severity::error ? "error" : "warning") << ": " << d.message;
    return os.str();
}

bool ValidationReport::has_errors() const {
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::error) return true;
    }
    return false;
}

namespace {

std::string syntax_message(const std::set<std::string>& expected, const std::string& found) {
    std::string msg = "syntax error: expected ";
    bool first = true;
    for (const auto& e : expected) {
        if (!first) msg += ", ";
        msg += "'" + e + "'";
        first = false;
    }
    msg += " but found '" + found + "'";
    return msg;
}

}  // namespace

SyntaxError::SyntaxError(Span where, std::set<std::string> expected_set, const std::string& found_text)
    : std::runtime_error(syntax_message(expected_set, found_text)),
      span(where),
      expected(std::move(expected_set)),
      found(found_text) {}

Diagnostic SyntaxError::diagnostic() const { return {Severity::error, span, what()}; }

DuplicateIdentifier::DuplicateIdentifier(Span where, const std::string& what, const std::string& id)
    : std::runtime_error("duplicate " + what + " identifier '" + id + "'"), span(where), identifier(id) {}

Diagnostic DuplicateIdentifier::diagnostic() const { return {Severity::error, span, what()}; }

}  // namespace hashnets::ahcl
