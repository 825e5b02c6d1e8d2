#include "hashnets/behavior/traces.hpp"

#include <deque>
#include <memory>
#include <optional>
#include <unordered_set>

#include <json.hpp>

namespace hashnets::behavior {

namespace {

using ahcl::Unit;

enum class T { done, stuck, act, emit, seq, par, loop_until, loop_forever, counter };

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
    T kind = T::done;
    const Action* a = nullptr;
    int depth = 0;
    std::vector<TermP> kids;
    std::size_t next = 0;  // seq: index of the next child of `a`
    int remaining = 0;     // counter: iterations still to start
    std::string port;      // emit
};

TermP make(Term t) { return std::make_shared<const Term>(std::move(t)); }

TermP done_term() {
    static TermP d = make(Term{});
    return d;
}

TermP stuck_term() {
    static TermP s = [] {
        Term t;
        t.kind = T::stuck;
        return make(std::move(t));
    }();
    return s;
}

struct Env {
    std::map<std::string, std::optional<StreamKind>> last;
    std::map<std::string, std::size_t> script_pos;
    std::map<std::string, int> sems;
};

struct Step {
    std::optional<std::string> symbol;
    TermP term;
    Env env;
};

// Port and group lookups kept local so the oracle shares no code with the translator.
struct UnitView {
    const Unit& u;

    const ahcl::Group* group(const std::string& id) const {
        for (const auto& g : u.groups) {
            if (g.id == id) return &g;
        }
        return nullptr;
    }

    const ahcl::Port* port(const std::string& id) const {
        for (const auto& p : u.ports) {
            if (p.id == id) return &p;
        }
        for (const auto& g : u.groups) {
            for (const auto& m : g.members) {
                if (m.id == id) return &m;
            }
        }
        return nullptr;
    }

    // Predicate variable that records the kinds moved through `port_id`.
    std::string variable(const std::string& port_id) const {
        for (const auto& g : u.groups) {
            for (const auto& m : g.members) {
                if (m.id == port_id) return g.id;
            }
        }
        return port_id;
    }
};

void collect_predicate_vars(const Action& a, std::set<std::string>& out) {
    if (a.kind == ActionKind::repeat_until || a.kind == ActionKind::if_then_else) {
        for (const auto& p : a.predicate.ports()) out.insert(p);
    }
    for (const auto& c : a.children) collect_predicate_vars(c, out);
}

class Explorer {
public:
    Explorer(const Unit& u, const Scripts& scripts, int max_len, const TraceOptions& opt)
        : view_{u}, scripts_(scripts), max_len_(max_len), opt_(opt) {
        collect_predicate_vars(u.protocol, predicate_vars_);
        for (const auto& s : u.semaphores) initial_.sems[s] = 0;
        for (const auto& p : u.ports) {
            if (p.stream) stream_vars_[p.id] = p.nesting;
        }
        for (const auto& g : u.groups) {
            if (!g.members.empty() && g.members.front().stream) stream_vars_[g.id] = g.members.front().nesting;
        }
        for (const auto& [var, n] : stream_vars_) {
            (void)n;
            if (opt_.source == KindSource::free || predicate_vars_.count(var)) initial_.last[var] = std::nullopt;
        }
        for (const auto& v : predicate_vars_) {
            if (!initial_.last.count(v)) initial_.last[v] = std::nullopt;
        }
    }

    TraceSet run() {
        TraceSet out;
        struct Node {
            TermP term;
            Env env;
            Trace word;
        };
        std::deque<Node> queue;
        std::unordered_set<std::string> seen;
        auto push = [&](TermP t, Env e, Trace w) {
            std::string key = serialize(*t) + "|" + serialize(e) + "|";
            for (const auto& s : w) key += s + " ";
            if (!seen.insert(key).second) return;
            if (seen.size() > opt_.max_states) throw std::runtime_error("trace enumeration exceeded state limit");
            queue.push_back({std::move(t), std::move(e), std::move(w)});
        };
        push(norm(act(&view_.u.protocol, 0)), initial_, {});
        while (!queue.empty()) {
            Node n = std::move(queue.front());
            queue.pop_front();
            out.prefixes.insert(n.word);
            if (n.term->kind == T::done) {
                out.complete.insert(n.word);
                // A repetitive unit may run its protocol again before the program ends.
                if (view_.u.kind == ahcl::UnitKind::repetitive) {
                    push(norm(act(&view_.u.protocol, 0)), n.env, n.word);
                }
                continue;
            }
            for (auto& s : steps(n.term, n.env)) {
                Trace w = n.word;
                if (s.symbol) {
                    if (static_cast<int>(w.size()) >= max_len_) continue;
                    w.push_back(*s.symbol);
                }
                push(std::move(s.term), std::move(s.env), std::move(w));
            }
        }
        return out;
    }

private:
    UnitView view_;
    const Scripts& scripts_;
    int max_len_;
    TraceOptions opt_;
    std::set<std::string> predicate_vars_;
    std::map<std::string, int> stream_vars_;
    Env initial_;

    static TermP act(const Action* a, int depth) {
        Term t;
        t.kind = T::act;
        t.a = a;
        t.depth = depth;
        return make(std::move(t));
    }

    static bool is_loop(const Action& a) {
        return a.kind == ActionKind::repeat_until || a.kind == ActionKind::repeat_counter ||
               a.kind == ActionKind::repeat_forever || a.kind == ActionKind::if_then_else;
    }

    TermP emit(const std::string& port) const {
        Term t;
        t.kind = T::emit;
        t.port = port;
        return make(std::move(t));
    }

    TermP norm(TermP t) const {
        switch (t->kind) {
        case T::act: {
            const Action& a = *t->a;
            int d = t->depth;
            switch (a.kind) {
            case ActionKind::skip: return done_term();
            case ActionKind::seq: {
                if (a.children.empty()) return done_term();
                Term s;
                s.kind = T::seq;
                s.a = &a;
                s.depth = d;
                s.kids = {norm(act(&a.children[0], d))};
                s.next = 1;
                return norm(make(std::move(s)));
            }
            case ActionKind::par: {
                Term p;
                p.kind = T::par;
                for (const auto& c : a.children) p.kids.push_back(norm(act(&c, d)));
                return norm(make(std::move(p)));
            }
            case ActionKind::repeat_until:
            case ActionKind::repeat_forever: {
                Term l;
                l.kind = a.kind == ActionKind::repeat_until ? T::loop_until : T::loop_forever;
                l.a = &a;
                l.depth = d;
                l.kids = {norm(act(&a.children[0], d + 1))};
                return make(std::move(l));
            }
            case ActionKind::repeat_counter: {
                Term c;
                c.kind = T::counter;
                c.a = &a;
                c.depth = d;
                c.remaining = a.count - 1;
                c.kids = {norm(act(&a.children[0], d + 1))};
                return norm(make(std::move(c)));
            }
            case ActionKind::activate: {
                if (const ahcl::Group* g = view_.group(a.id); g && g->kind == ahcl::GroupKind::all) {
                    Term p;
                    p.kind = T::par;
                    for (const auto& m : g->members) p.kids.push_back(emit(m.id));
                    return norm(make(std::move(p)));
                }
                if (!view_.group(a.id)) return emit(a.id);
                return t;
            }
            default: return t;
            }
        }
        case T::seq: {
            if (t->kids[0]->kind != T::done) return t;
            const Action& a = *t->a;
            if (t->next >= a.children.size()) return done_term();
            Term s = *t;
            s.kids = {norm(act(&a.children[s.next], t->depth))};
            s.next += 1;
            return norm(make(std::move(s)));
        }
        case T::par: {
            bool all_done = true;
            for (const auto& k : t->kids) all_done = all_done && k->kind == T::done;
            return all_done ? done_term() : t;
        }
        case T::counter: {
            if (t->kids[0]->kind != T::done) return t;
            if (t->remaining == 0) return done_term();
            Term c = *t;
            c.remaining -= 1;
            c.kids = {norm(act(&t->a->children[0], t->depth + 1))};
            return norm(make(std::move(c)));
        }
        default: return t;
        }
    }

    TermP with_kid(const TermP& parent, std::size_t i, TermP kid) const {
        Term t = *parent;
        t.kids[i] = std::move(kid);
        return norm(make(std::move(t)));
    }

    std::vector<StreamKind> kinds_for(const std::string& var, const Env& env, int n) const {
        std::set<StreamKind> allowed;
        if (opt_.order_consistency) {
            const auto& last = env.last.at(var);
            allowed = last ? valid_successors(*last, n) : valid_initial(n);
        } else {
            allowed = valid_initial(n);
        }
        return {allowed.begin(), allowed.end()};
    }

    // Records the kind carried by an activation of `port_id` and yields the resulting steps.
    void activation(const std::string& symbol, const std::string& port_id, const Env& env,
                    std::vector<Step>& out) const {
        const ahcl::Port* p = view_.port(port_id);
        std::string var = view_.variable(port_id);
        bool stream = p && p->stream;
        if (!stream || opt_.source == KindSource::nondeterministic) {
            out.push_back({symbol, done_term(), env});
            return;
        }
        if (opt_.source == KindSource::scripts) {
            Env e = env;
            if (predicate_vars_.count(var)) {
                auto it = scripts_.find(var);
                std::size_t& pos = e.script_pos[var];
                if (it == scripts_.end() || pos >= it->second.size()) {
                    throw ScriptExhausted("script for '" + var + "' exhausted after " + std::to_string(pos) +
                                          " activations");
                }
                e.last[var] = it->second[pos];
                ++pos;
            }
            out.push_back({symbol, done_term(), std::move(e)});
            return;
        }
        auto kinds = kinds_for(var, env, p->nesting);
        if (kinds.empty()) {
            out.push_back({std::nullopt, stuck_term(), env});
            return;
        }
        for (const auto& k : kinds) {
            Env e = env;
            e.last[var] = k;
            out.push_back({symbol, done_term(), std::move(e)});
        }
    }

    std::vector<TriBool> decide(const Action& a, int depth, const Env& env) const {
        if (opt_.source == KindSource::nondeterministic) return {TriBool::true_, TriBool::false_};
        return {evaluate_stream_predicate(a.predicate, env.last, depth, opt_.never_activated)};
    }

    std::vector<Step> steps(const TermP& t, const Env& env) const {
        std::vector<Step> out;
        switch (t->kind) {
        case T::done:
        case T::stuck: break;
        case T::emit: {
            std::string symbol = view_.u.id + "." + t->port;
            const ahcl::Port* p = view_.port(t->port);
            symbol += (p && p->direction == ahcl::Direction::output) ? "!" : "?";
            activation(symbol, t->port, env, out);
            break;
        }
        case T::act: {
            const Action& a = *t->a;
            switch (a.kind) {
            case ActionKind::alt:
                for (const auto& c : a.children) out.push_back({std::nullopt, norm(act(&c, t->depth)), env});
                break;
            case ActionKind::signal: {
                Env e = env;
                e.sems[a.id] += 1;
                out.push_back({std::nullopt, done_term(), std::move(e)});
                break;
            }
            case ActionKind::wait:
                if (env.sems.count(a.id) && env.sems.at(a.id) > 0) {
                    Env e = env;
                    e.sems[a.id] -= 1;
                    out.push_back({std::nullopt, done_term(), std::move(e)});
                }
                break;
            case ActionKind::do_collective:
                activation("do(" + view_.u.id + "." + a.id + ")", a.id, env, out);
                break;
            case ActionKind::activate:  // any-group: one member communicates
                if (const ahcl::Group* g = view_.group(a.id)) {
                    for (const auto& m : g->members) {
                        for (auto& s : steps(emit(m.id), env)) out.push_back(std::move(s));
                    }
                }
                break;
            case ActionKind::if_then_else:
                for (TriBool v : decide(a, t->depth, env)) {
                    if (v == TriBool::fail) {
                        out.push_back({std::nullopt, stuck_term(), env});
                    } else {
                        const Action& branch = a.children[v == TriBool::true_ ? 0 : 1];
                        out.push_back({std::nullopt, norm(act(&branch, t->depth + 1)), env});
                    }
                }
                break;
            default: break;
            }
            break;
        }
        case T::seq:
        case T::counter:
            for (auto& s : steps(t->kids[0], env)) {
                out.push_back({std::move(s.symbol), with_kid(t, 0, std::move(s.term)), std::move(s.env)});
            }
            break;
        case T::par:
            for (std::size_t i = 0; i < t->kids.size(); ++i) {
                for (auto& s : steps(t->kids[i], env)) {
                    out.push_back({std::move(s.symbol), with_kid(t, i, std::move(s.term)), std::move(s.env)});
                }
            }
            break;
        case T::loop_until:
        case T::loop_forever: {
            const TermP& body = t->kids[0];
            if (body->kind == T::done) {
                auto restart = [&] { return with_kid(t, 0, norm(act(&t->a->children[0], t->depth + 1))); };
                if (t->kind == T::loop_forever) {
                    out.push_back({std::nullopt, restart(), env});
                    break;
                }
                for (TriBool v : decide(*t->a, t->depth, env)) {
                    if (v == TriBool::true_) out.push_back({std::nullopt, done_term(), env});
                    if (v == TriBool::false_) out.push_back({std::nullopt, restart(), env});
                    if (v == TriBool::fail) out.push_back({std::nullopt, stuck_term(), env});
                }
                break;
            }
            for (auto& s : steps(body, env)) {
                out.push_back({std::move(s.symbol), with_kid(t, 0, std::move(s.term)), std::move(s.env)});
            }
            break;
        }
        }
        return out;
    }

    static std::string serialize(const Term& t) {
        std::string s = std::to_string(static_cast<int>(t.kind));
        if (t.a) s += "@" + std::to_string(reinterpret_cast<std::uintptr_t>(t.a));
        if (t.kind == T::seq) s += "n" + std::to_string(t.next);
        if (t.kind == T::counter) s += "r" + std::to_string(t.remaining);
        if (t.kind == T::emit) s += "e" + t.port;
        if (!t.kids.empty()) {
            s += "(";
            for (const auto& k : t.kids) s += serialize(*k) + ",";
            s += ")";
        }
        return s;
    }

    static std::string serialize(const Env& e) {
        std::string s;
        for (const auto& [k, v] : e.last) s += k + "=" + (v ? to_string(*v) : "-") + ";";
        for (const auto& [k, v] : e.script_pos) s += k + "#" + std::to_string(v) + ";";
        for (const auto& [k, v] : e.sems) s += k + ":" + std::to_string(v) + ";";
        return s;
    }
};

}  // namespace

TraceSet enumerate_traces(const ahcl::Unit& u, const Scripts& scripts, int max_len, const TraceOptions& opt) {
    Explorer e(u, scripts, max_len, opt);
    return e.run();
}

Scripts parse_scripts(const std::string& json_text) {
    Scripts out;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("scripts: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("scripts: expected a JSON object");
    for (const auto& [port, kinds] : j.items()) {
        if (!kinds.is_array()) throw std::invalid_argument("scripts: '" + port + "' must map to an array");
        auto& seq = out[port];
        for (const auto& k : kinds) {
            if (!k.is_string()) throw std::invalid_argument("scripts: kinds must be strings");
            auto parsed = parse_kind(k.get<std::string>());
            if (!parsed) throw std::invalid_argument("scripts: unknown kind '" + k.get<std::string>() + "'");
            seq.push_back(*parsed);
        }
    }
    return out;
}

}  // namespace hashnets::behavior
