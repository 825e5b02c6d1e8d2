#include <map>
#include <set>

#include "hashnets/ahcl/parser.hpp"

namespace hashnets::ahcl {

using behavior::Action;
using behavior::ActionKind;

namespace {

class Validator {
public:
    explicit Validator(const Component& c) : c_(c) {}

    ValidationReport run() {
        std::set<std::string> unit_ids;
        for (const auto& u : c_.units) {
            if (!unit_ids.insert(u.id).second) error(u.span, "duplicate unit identifier '" + u.id + "'");
            check_unit(u);
        }
        check_channels();
        check_collectives();
        return std::move(report_);
    }

private:
    const Component& c_;
    ValidationReport report_;

    void error(Span s, std::string msg) { report_.diagnostics.push_back({Severity::error, s, std::move(msg)}); }
    void warning(Span s, std::string msg) {
        report_.diagnostics.push_back({Severity::warning, s, std::move(msg)});
    }

    void check_port(const Unit& u, const Port& p) {
        if (!p.stream && p.nesting != 0) {
            error(p.span, "port '" + u.id + "." + p.id + "' is not a stream but has nesting factor " +
                              std::to_string(p.nesting));
        }
        if (p.stream && p.nesting < 1) {
            error(p.span, "stream port '" + u.id + "." + p.id + "' needs a nesting factor >= 1");
        }
    }

    void check_unit(const Unit& u) {
        std::set<std::string> ids;
        auto claim = [&](const std::string& id, Span s) {
            if (!ids.insert(id).second) error(s, "duplicate port identifier '" + id + "' in unit '" + u.id + "'");
        };
        for (const auto& p : u.ports) {
            claim(p.id, p.span);
            check_port(u, p);
        }
        for (const auto& g : u.groups) {
            claim(g.id, g.span);
            if (g.members.empty()) error(g.span, "group '" + g.id + "' has no members");
            for (const auto& m : g.members) {
                claim(m.id, m.span);
                check_port(u, m);
                if (m.collective) error(m.span, "collective port '" + m.id + "' cannot be a group member");
                const Port& first = g.members.front();
                if (m.direction != first.direction || m.stream != first.stream ||
                    m.nesting != first.nesting) {
                    error(m.span, "members of group '" + g.id +
                                      "' must share direction, stream flag and nesting factor");
                }
            }
        }
        std::set<std::string> sems;
        for (const auto& s : u.semaphores) {
            if (!sems.insert(s).second) error(u.span, "duplicate semaphore '" + s + "'");
        }
        check_action(u, u.protocol, 0);
    }

    // Stream nesting of a predicate variable; nullopt when it is not a stream variable.
    std::optional<int> stream_nesting(const Unit& u, const std::string& id) const {
        if (const Group* g = u.find_group(id)) {
            if (g->members.empty() || !g->members.front().stream) return std::nullopt;
            return g->members.front().nesting;
        }
        if (const Port* p = u.find_port(id)) {
            if (!p->stream) return std::nullopt;
            return p->nesting;
        }
        return std::nullopt;
    }

    void check_predicate(const Unit& u, const Action& a, int depth) {
        if (a.predicate.disjuncts.empty()) error(a.span, "empty stream predicate");
        for (const auto& conj : a.predicate.disjuncts) {
            if (conj.ports.empty()) error(a.span, "empty conjunction in stream predicate");
            for (const auto& id : conj.ports) {
                if (!u.find_port(id) && !u.find_group(id)) {
                    error(a.span, "stream predicate references unknown port '" + id + "'");
                    continue;
                }
                auto n = stream_nesting(u, id);
                if (!n) {
                    error(a.span, "stream predicate references non-stream port '" + id + "'");
                } else if (*n <= depth) {
                    warning(a.span, "stream port '" + id + "' has nesting factor " + std::to_string(*n) +
                                        " not above loop depth " + std::to_string(depth));
                }
            }
        }
    }

    void check_action(const Unit& u, const Action& a, int depth) {
        switch (a.kind) {
        case ActionKind::repeat_until:
        case ActionKind::if_then_else:
            check_predicate(u, a, depth);
            break;
        case ActionKind::repeat_counter:
            if (a.count < 1) error(a.span, "repeat counter must be at least 1");
            break;
        case ActionKind::signal:
        case ActionKind::wait: {
            bool declared = false;
            for (const auto& s : u.semaphores) declared = declared || s == a.id;
            if (!declared) error(a.span, "semaphore '" + a.id + "' is not declared in unit '" + u.id + "'");
            break;
        }
        case ActionKind::activate: {
            const Port* p = u.find_port(a.id);
            const Group* g = u.find_group(a.id);
            Direction dir = Direction::input;
            if (g) {
                if (g->members.empty()) break;
                dir = g->members.front().direction;
            } else if (p) {
                if (u.group_of(a.id)) {
                    error(a.span, "port '" + a.id + "' belongs to group '" + u.group_of(a.id)->id +
                                      "' and can only be activated through the group");
                    break;
                }
                if (p->collective) {
                    error(a.span, "collective port '" + a.id + "' can only be activated with 'do'");
                    break;
                }
                dir = p->direction;
            } else {
                error(a.span, "activation of unknown port '" + a.id + "' in unit '" + u.id + "'");
                break;
            }
            bool sends = a.polarity == behavior::Polarity::send;
            if (sends && dir != Direction::output) error(a.span, "'" + a.id + "!' activates an input port");
            if (!sends && dir != Direction::input) error(a.span, "'" + a.id + "?' activates an output port");
            break;
        }
        case ActionKind::do_collective: {
            const Port* p = u.find_port(a.id);
            if (!p || !p->collective) {
                error(a.span, "'do " + a.id + "' needs a collective port of unit '" + u.id + "'");
            } else if (!c_.collective_of({u.id, a.id})) {
                error(a.span, "collective port '" + u.id + "." + a.id + "' is not part of any collective group");
            }
            break;
        }
        default:
            break;
        }
        bool loop = a.kind == ActionKind::repeat_until || a.kind == ActionKind::repeat_counter ||
                    a.kind == ActionKind::repeat_forever || a.kind == ActionKind::if_then_else;
        for (const auto& child : a.children) check_action(u, child, loop ? depth + 1 : depth);
    }

    const Port* endpoint(const Channel& ch, const PortRef& r, const char* role) {
        const Unit* u = c_.find_unit(r.unit);
        if (!u) {
            error(ch.span, std::string(role) + " of channel '" + ch.id + "' names unknown unit '" + r.unit + "'");
            return nullptr;
        }
        if (u->find_group(r.port)) {
            error(ch.span, std::string(role) + " of channel '" + ch.id + "' is a group; connect its members");
            return nullptr;
        }
        const Port* p = u->find_port(r.port);
        if (!p) {
            error(ch.span, std::string(role) + " of channel '" + ch.id + "' names unknown port '" + r.str() + "'");
            return nullptr;
        }
        if (p->collective) {
            error(ch.span, "collective port '" + r.str() + "' cannot be a channel endpoint");
            return nullptr;
        }
        return p;
    }

    void check_channels() {
        std::map<std::string, std::string> bound;
        for (const auto& ch : c_.channels) {
            const Port* s = endpoint(ch, ch.sender, "sender");
            const Port* r = endpoint(ch, ch.receiver, "receiver");
            for (const PortRef* ref : {&ch.sender, &ch.receiver}) {
                auto [it, fresh] = bound.emplace(ref->str(), ch.id);
                if (!fresh) {
                    error(ch.span, "port '" + ref->str() + "' is already bound to channel '" + it->second + "'");
                }
            }
            if (s && r) {
                if (s->direction != Direction::output || r->direction != Direction::input) {
                    error(ch.span, "channel endpoints must be output→input ('" + ch.id + "')");
                }
                if (s->nesting != r->nesting || s->stream != r->stream) {
                    error(ch.span, "nesting mismatch on channel '" + ch.id + "': " + ch.sender.str() + " has " +
                                       std::to_string(s->nesting) + ", " + ch.receiver.str() + " has " +
                                       std::to_string(r->nesting));
                }
            }
            if (ch.mode == ChannelMode::buffered && ch.capacity && *ch.capacity < 1) {
                error(ch.span, "buffered channel '" + ch.id + "' needs a capacity of at least 1");
            }
            if (ch.mode != ChannelMode::buffered && ch.capacity) {
                error(ch.span, "only buffered channels take a capacity");
            }
        }
    }

    void check_collectives() {
        std::map<std::string, std::string> owner;
        for (const auto& g : c_.collectives) {
            std::set<std::string> units;
            std::optional<int> nesting = g.nesting;
            if (g.members.empty()) error(g.span, "collective group '" + g.id + "' has no members");
            for (const auto& m : g.members) {
                if (!units.insert(m.unit).second) {
                    error(g.span, "collective group '" + g.id + "' lists unit '" + m.unit + "' twice");
                }
                auto [it, fresh] = owner.emplace(m.str(), g.id);
                if (!fresh) error(g.span, "collective port '" + m.str() + "' already belongs to '" + it->second + "'");
                const Port* p = c_.find_port(m);
                if (!p || !p->collective) {
                    error(g.span, "collective group '" + g.id + "' member '" + m.str() + "' is not a collective port");
                    continue;
                }
                if (!nesting) nesting = p->nesting;
                if (*nesting != p->nesting) {
                    error(g.span, "collective group '" + g.id + "' mixes nesting factors");
                }
            }
        }
    }
};

}  // namespace

ValidationReport validate_configuration(const Component& c) {
    Validator v(c);
    return v.run();
}

}  // namespace hashnets::ahcl
