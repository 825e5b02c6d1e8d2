#include "hashnets/behavior/action.hpp"

#include <algorithm>

namespace hashnets::behavior {

std::vector<std::string> StreamPredicate::ports() const {
    std::vector<std::string> out;
    for (const auto& c : disjuncts) {
        for (const auto& p : c.ports) {
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        }
    }
    return out;
}

bool Action::operator==(const Action& o) const {
    if (kind != o.kind || children != o.children) return false;
    switch (kind) {
    case ActionKind::repeat_until:
    case ActionKind::if_then_else:
        return predicate == o.predicate;
    case ActionKind::repeat_counter:
        return count == o.count;
    case ActionKind::signal:
    case ActionKind::wait:
    case ActionKind::do_collective:
        return id == o.id;
    case ActionKind::activate:
        return id == o.id && polarity == o.polarity;
    default:
        return true;
    }
}

namespace {

Action make(ActionKind k, std::vector<Action> children = {}) {
    Action a;
    a.kind = k;
    a.children = std::move(children);
    return a;
}

}  // namespace

Action skip() { return make(ActionKind::skip); }
Action seq(std::vector<Action> parts) { return make(ActionKind::seq, std::move(parts)); }
Action par(std::vector<Action> parts) { return make(ActionKind::par, std::move(parts)); }
Action alt(std::vector<Action> parts) { return make(ActionKind::alt, std::move(parts)); }

Action repeat_until(Action body, StreamPredicate pred) {
    Action a = make(ActionKind::repeat_until, {std::move(body)});
    a.predicate = std::move(pred);
    return a;
}

Action repeat_counter(Action body, int n) {
    Action a = make(ActionKind::repeat_counter, {std::move(body)});
    a.count = n;
    return a;
}

Action repeat_forever(Action body) { return make(ActionKind::repeat_forever, {std::move(body)}); }

Action if_then_else(StreamPredicate pred, Action then_branch, Action else_branch) {
    Action a = make(ActionKind::if_then_else, {std::move(then_branch), std::move(else_branch)});
    a.predicate = std::move(pred);
    return a;
}

Action signal(std::string sem) {
    Action a = make(ActionKind::signal);
    a.id = std::move(sem);
    return a;
}

Action wait(std::string sem) {
    Action a = make(ActionKind::wait);
    a.id = std::move(sem);
    return a;
}

Action send(std::string port) {
    Action a = make(ActionKind::activate);
    a.id = std::move(port);
    a.polarity = Polarity::send;
    return a;
}

Action receive(std::string port) {
    Action a = make(ActionKind::activate);
    a.id = std::move(port);
    a.polarity = Polarity::receive;
    return a;
}

Action do_collective(std::string port) {
    Action a = make(ActionKind::do_collective);
    a.id = std::move(port);
    return a;
}

StreamPredicate var(std::string port) {
    StreamPredicate p;
    p.disjuncts.push_back({false, {std::move(port)}});
    return p;
}

const char* kind_name(ActionKind k) {
    switch (k) {
    case ActionKind::skip: return "skip";
    case ActionKind::seq: return "seq";
    case ActionKind::par: return "par";
    case ActionKind::alt: return "alt";
    case ActionKind::repeat_until: return "repeat_until";
    case ActionKind::repeat_counter: return "repeat_counter";
    case ActionKind::repeat_forever: return "repeat_forever";
    case ActionKind::if_then_else: return "if";
    case ActionKind::signal: return "signal";
    case ActionKind::wait: return "wait";
    case ActionKind::activate: return "activate";
    case ActionKind::do_collective: return "do";
    }
    return "?";
}

void collect_activations(const Action& a, std::vector<const Action*>& out) {
    if (a.kind == ActionKind::activate || a.kind == ActionKind::do_collective) out.push_back(&a);
    for (const auto& c : a.children) collect_activations(c, out);
}

}  // namespace hashnets::behavior
