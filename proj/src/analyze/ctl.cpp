#include "hashnets/analyze/ctl.hpp"

#include <deque>
#include <unordered_map>

namespace hashnets::analyze {

using petri::ReachGraph;
using petri::StateId;

CtlPtr ctl_const(bool v) {
    auto f = std::make_shared<Ctl>();
    f->op = v ? CtlOp::tt : CtlOp::ff;
    return f;
}

CtlPtr ctl_place(const petri::InterlacedNet& n, const std::string& place, CtlOp op, unsigned count) {
    auto p = n.find_place(place);
    if (!p) throw std::invalid_argument("unknown place '" + place + "'");
    auto f = std::make_shared<Ctl>();
    f->op = op;
    f->node = *p;
    f->name = n.places()[*p].id;
    f->count = count;
    return f;
}

CtlPtr ctl_dead(const petri::InterlacedNet& n, const std::string& transition) {
    auto t = n.find_transition(transition);
    if (!t) throw std::invalid_argument("unknown transition '" + transition + "'");
    auto f = std::make_shared<Ctl>();
    f->op = CtlOp::dead;
    f->node = *t;
    f->name = n.transitions()[*t].id;
    return f;
}

CtlPtr ctl_unary(CtlOp op, CtlPtr a) {
    auto f = std::make_shared<Ctl>();
    f->op = op;
    f->kids = {std::move(a)};
    return f;
}

CtlPtr ctl_binary(CtlOp op, CtlPtr a, CtlPtr b) {
    auto f = std::make_shared<Ctl>();
    f->op = op;
    f->kids = {std::move(a), std::move(b)};
    return f;
}

CtlPtr ctl_all(std::vector<CtlPtr> fs) {
    if (fs.empty()) return ctl_const(true);
    CtlPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = ctl_binary(CtlOp::and_, acc, fs[i]);
    return acc;
}

CtlPtr ctl_any(std::vector<CtlPtr> fs) {
    if (fs.empty()) return ctl_const(false);
    CtlPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = ctl_binary(CtlOp::or_, acc, fs[i]);
    return acc;
}

std::string to_string(const Ctl& f) {
    auto k = [&](std::size_t i) { return to_string(*f.kids[i]); };
    switch (f.op) {
    case CtlOp::tt: return "true";
    case CtlOp::ff: return "false";
    case CtlOp::ge: return f.name + " >= " + std::to_string(f.count);
    case CtlOp::eq: return f.name + " = " + std::to_string(f.count);
    case CtlOp::dead: return "dead(" + f.name + ")";
    case CtlOp::not_: return "!(" + k(0) + ")";
    case CtlOp::and_: return "(" + k(0) + " & " + k(1) + ")";
    case CtlOp::or_: return "(" + k(0) + " | " + k(1) + ")";
    case CtlOp::implies: return "(" + k(0) + " => " + k(1) + ")";
    case CtlOp::EX: return "EX(" + k(0) + ")";
    case CtlOp::AX: return "AX(" + k(0) + ")";
    case CtlOp::EF: return "EF(" + k(0) + ")";
    case CtlOp::AF: return "AF(" + k(0) + ")";
    case CtlOp::EG: return "EG(" + k(0) + ")";
    case CtlOp::AG: return "AG(" + k(0) + ")";
    case CtlOp::EU: return "E[" + k(0) + " U " + k(1) + "]";
    case CtlOp::AU: return "A[" + k(0) + " U " + k(1) + "]";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::true_: return "true";
    case Verdict::false_: return "false";
    case Verdict::unknown: return "unknown";
    }
    return "?";
}

namespace {

struct Predecessors {
    std::vector<std::uint64_t> start;
    std::vector<StateId> from;

    explicit Predecessors(const ReachGraph& g) : start(g.size() + 1, 0) {
        for (StateId s = 0; s < g.size(); ++s) {
            for (const auto& e : g.edges(s)) ++start[e.target + 1];
        }
        for (std::size_t i = 0; i < g.size(); ++i) start[i + 1] += start[i];
        from.resize(start.back());
        auto fill = start;
        for (StateId s = 0; s < g.size(); ++s) {
            for (const auto& e : g.edges(s)) from[fill[e.target]++] = s;
        }
    }
};

class Labeller {
public:
    Labeller(const petri::InterlacedNet& n, const ReachGraph& g) : n_(n), g_(g) {}

    std::vector<bool> eval(const Ctl& f) {
        const std::size_t N = g_.size();
        std::vector<bool> out(N, false);
        switch (f.op) {
        case CtlOp::tt: out.assign(N, true); break;
        case CtlOp::ff: break;
        case CtlOp::ge:
        case CtlOp::eq:
            for (StateId s = 0; s < N; ++s) {
                auto v = g_.tokens(s, f.node);
                out[s] = f.op == CtlOp::ge ? v >= f.count : v == f.count;
            }
            break;
        case CtlOp::dead:
            for (StateId s = 0; s < N; ++s) {
                out[s] = true;
                for (const auto& e : g_.edges(s)) out[s] = out[s] && e.transition != f.node;
            }
            break;
        case CtlOp::not_: {
            auto a = eval(*f.kids[0]);
            for (std::size_t s = 0; s < N; ++s) out[s] = !a[s];
            break;
        }
        case CtlOp::and_:
        case CtlOp::or_:
        case CtlOp::implies: {
            auto a = eval(*f.kids[0]);
            auto b = eval(*f.kids[1]);
            for (std::size_t s = 0; s < N; ++s) {
                out[s] = f.op == CtlOp::and_ ? (a[s] && b[s]) : f.op == CtlOp::or_ ? (a[s] || b[s]) : (!a[s] || b[s]);
            }
            break;
        }
        case CtlOp::EX:
        case CtlOp::AX: {
            auto a = eval(*f.kids[0]);
            for (StateId s = 0; s < N; ++s) {
                bool any = false, all = true;
                for (const auto& e : g_.edges(s)) {
                    any = any || a[e.target];
                    all = all && a[e.target];
                }
                out[s] = f.op == CtlOp::EX ? any : all;
            }
            break;
        }
        case CtlOp::EF: out = exists_until(std::vector<bool>(N, true), eval(*f.kids[0])); break;
        case CtlOp::EU: out = exists_until(eval(*f.kids[0]), eval(*f.kids[1])); break;
        case CtlOp::AF: out = always_until(std::vector<bool>(N, true), eval(*f.kids[0])); break;
        case CtlOp::AU: out = always_until(eval(*f.kids[0]), eval(*f.kids[1])); break;
        case CtlOp::AG: {
            auto a = eval(*f.kids[0]);
            a.flip();
            out = exists_until(std::vector<bool>(N, true), a);
            out.flip();
            break;
        }
        case CtlOp::EG: {
            auto a = eval(*f.kids[0]);
            a.flip();
            out = always_until(std::vector<bool>(N, true), a);
            out.flip();
            break;
        }
        }
        return out;
    }

private:
    const petri::InterlacedNet& n_;
    const ReachGraph& g_;
    std::unique_ptr<Predecessors> preds_;

    const Predecessors& preds() {
        if (!preds_) preds_ = std::make_unique<Predecessors>(g_);
        return *preds_;
    }

    // E[a U b]: backward search from b through a-states.
    std::vector<bool> exists_until(const std::vector<bool>& a, const std::vector<bool>& b) {
        const auto& p = preds();
        std::vector<bool> out = b;
        std::deque<StateId> queue;
        for (StateId s = 0; s < out.size(); ++s) {
            if (out[s]) queue.push_back(s);
        }
        while (!queue.empty()) {
            StateId s = queue.front();
            queue.pop_front();
            for (auto i = p.start[s]; i < p.start[s + 1]; ++i) {
                StateId q = p.from[i];
                if (!out[q] && a[q]) {
                    out[q] = true;
                    queue.push_back(q);
                }
            }
        }
        return out;
    }

    // A[a U b]: a state joins once b holds, or a holds and every outgoing edge leads inside.
    std::vector<bool> always_until(const std::vector<bool>& a, const std::vector<bool>& b) {
        const auto& p = preds();
        std::vector<bool> out = b;
        std::vector<std::uint32_t> pending(g_.size());
        std::deque<StateId> queue;
        for (StateId s = 0; s < out.size(); ++s) {
            pending[s] = static_cast<std::uint32_t>(g_.edges(s).size());
            if (out[s]) queue.push_back(s);
        }
        while (!queue.empty()) {
            StateId s = queue.front();
            queue.pop_front();
            for (auto i = p.start[s]; i < p.start[s + 1]; ++i) {
                StateId q = p.from[i];
                if (out[q] || pending[q] == 0) continue;
                if (--pending[q] == 0 && a[q]) {
                    out[q] = true;
                    queue.push_back(q);
                }
            }
        }
        return out;
    }
};

bool propositional(const Ctl& f) {
    switch (f.op) {
    case CtlOp::EX:
    case CtlOp::AX:
    case CtlOp::EF:
    case CtlOp::AF:
    case CtlOp::EG:
    case CtlOp::AG:
    case CtlOp::EU:
    case CtlOp::AU: return false;
    default: break;
    }
    for (const auto& k : f.kids) {
        if (!propositional(*k)) return false;
    }
    return true;
}

// Shortest path from the root to a `target` state, moving only through `through` states.
std::optional<std::vector<std::uint32_t>> shortest(const ReachGraph& g, const std::vector<bool>& through,
                                                   const std::vector<bool>& target) {
    std::vector<std::int64_t> parent(g.size(), -1);
    std::vector<std::uint32_t> via(g.size(), 0);
    std::deque<StateId> queue{0};
    parent[0] = 0;
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        if (target[s]) {
            std::vector<std::uint32_t> path;
            for (StateId x = s; x != 0; x = static_cast<StateId>(parent[x])) path.push_back(via[x]);
            return std::vector<std::uint32_t>(path.rbegin(), path.rend());
        }
        if (!through[s]) continue;
        for (const auto& e : g.edges(s)) {
            if (parent[e.target] >= 0) continue;
            parent[e.target] = s;
            via[e.target] = e.transition;
            queue.push_back(e.target);
        }
    }
    return std::nullopt;
}

// Follows `inside` states from the root until a dead end or a repeated state.
void lasso(const ReachGraph& g, const std::vector<bool>& inside, CtlResult& r) {
    std::unordered_map<StateId, std::size_t> seen;
    StateId s = 0;
    for (;;) {
        seen.emplace(s, r.path.size());
        std::optional<petri::ReachEdge> next;
        for (const auto& e : g.edges(s)) {
            if (inside[e.target]) {
                next = e;
                break;
            }
        }
        if (!next) return;
        r.path.push_back(next->transition);
        if (auto it = seen.find(next->target); it != seen.end()) {
            r.loop_start = it->second;
            return;
        }
        s = next->target;
    }
}

void witness(const petri::InterlacedNet& n, const ReachGraph& g, const Ctl& f, bool value, CtlResult& r) {
    Labeller l(n, g);
    const std::size_t N = g.size();
    auto negate = [](std::vector<bool> v) {
        v.flip();
        return v;
    };
    switch (f.op) {
    case CtlOp::not_: witness(n, g, *f.kids[0], !value, r); return;
    case CtlOp::EF:
        if (value) r.path = shortest(g, std::vector<bool>(N, true), l.eval(*f.kids[0])).value_or(r.path);
        return;
    case CtlOp::AG:
        if (!value) r.path = shortest(g, std::vector<bool>(N, true), negate(l.eval(*f.kids[0]))).value_or(r.path);
        return;
    case CtlOp::EU:
        if (value) r.path = shortest(g, l.eval(*f.kids[0]), l.eval(*f.kids[1])).value_or(r.path);
        return;
    case CtlOp::EX:
    case CtlOp::AX: {
        auto a = l.eval(*f.kids[0]);
        bool want = f.op == CtlOp::EX ? value : !value;
        if (!want) return;
        for (const auto& e : g.edges(0)) {
            if (a[e.target] == (f.op == CtlOp::EX)) {
                r.path = {e.transition};
                return;
            }
        }
        return;
    }
    case CtlOp::EG:
        if (value) lasso(g, l.eval(f), r);
        return;
    case CtlOp::AF:
        if (!value) lasso(g, negate(l.eval(f)), r);
        return;
    default: return;
    }
}

}  // namespace

std::vector<bool> label(const petri::InterlacedNet& n, const ReachGraph& g, const Ctl& f) {
    return Labeller(n, g).eval(f);
}

CtlResult check_ctl(const petri::InterlacedNet& n, const ReachGraph& g, const Ctl& f, bool strict) {
    if (g.truncated && strict) throw TruncatedGraph("reachability graph is truncated");
    CtlResult r;
    auto values = label(n, g, f);
    for (bool v : values) r.satisfying_states += v ? 1 : 0;
    bool v = values[0];
    r.verdict = v ? Verdict::true_ : Verdict::false_;
    witness(n, g, f, v, r);
    if (g.truncated) {
        // Only a concrete path to a state decided by its own marking survives truncation.
        const Ctl* top = &f;
        bool want = v;
        while (top->op == CtlOp::not_) {
            top = top->kids[0].get();
            want = !want;
        }
        bool settled = (top->op == CtlOp::EF && want && propositional(*top->kids[0])) ||
                       (top->op == CtlOp::AG && !want && propositional(*top->kids[0])) ||
                       propositional(*top);
        if (!settled) {
            r.verdict = Verdict::unknown;
            r.path.clear();
            r.loop_start.reset();
        }
    }
    return r;
}

}  // namespace hashnets::analyze
