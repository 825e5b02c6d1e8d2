#include "hashnets/translate/translate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "builder.hpp"
#include "streams.hpp"

namespace hashnets::translate {

using behavior::Action;
using behavior::ActionKind;
using detail::ArcList;
using detail::Builder;
using detail::node;
using detail::StreamVar;

std::string port_name(const std::string& unit, const std::string& port) { return unit + "." + port; }

std::string stream_variable(const ahcl::Component& c, const std::string& unit, const std::string& port) {
    const ahcl::Unit* u = c.find_unit(unit);
    if (!u) throw UnboundPort("unknown unit '" + unit + "'");
    if (const ahcl::Group* g = u->find_group(port)) return port_name(unit, g->id);
    if (const ahcl::Group* g = u->group_of(port)) return port_name(unit, g->id);
    if (const ahcl::CollectiveGroup* g = c.collective_of({unit, port})) return g->id;
    return port_name(unit, port);
}

namespace {

struct Binding {
    const ahcl::Channel* channel = nullptr;
    bool sender = false;
    const ahcl::CollectiveGroup* collective = nullptr;
};

std::string prepared(const std::string& p) { return node("port_prepared", {p}); }
std::string complete(const std::string& p) { return node("port_complete", {p}); }
std::string unprepared(const std::string& p) { return node("port_unprepared", {p}); }
std::string started(const std::string& u) { return node("process_started", {u}); }
std::string finished(const std::string& u) { return node("process_finished", {u}); }

std::string join_labels(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::string out;
    for (const auto& l : labels) out += (out.empty() ? "" : "|") + l;
    return out;
}

class Translator {
public:
    Translator(const ahcl::Component& c, const TranslationOptions& opt) : c_(c), opt_(opt) {
        if (opt_.with_order_consistency && !opt_.with_stream_protocol) {
            throw std::invalid_argument("order consistency requires the stream protocol");
        }
        if (opt_.buffer_default < 1) throw std::invalid_argument("buffer_default must be positive");
        bind();
    }

    SliceSet run() {
        program_slice();
        for (const auto& u : c_.units) {
            unit_slice(u);
            ports_slice(u);
        }
        for (const auto& ch : c_.channels) channel_slice(ch);
        for (const auto& g : c_.collectives) collective_slice(g);
        if (opt_.with_stream_protocol) {
            for (const auto& [id, n] : stream_vars_) {
                Builder b(slice("stream:" + id));
                detail::declare_stream_variable(b, {id, n}, opt_.with_order_consistency);
            }
        }
        return std::move(out_);
    }

private:
    const ahcl::Component& c_;
    TranslationOptions opt_;
    SliceSet out_;
    std::map<std::string, Binding> bindings_;
    std::set<std::string> complemented_;
    std::map<std::string, int> stream_vars_;
    int counter_ = 0;

    petri::InterlacedNet& slice(const std::string& name) {
        out_.slices.emplace_back(name, petri::InterlacedNet{});
        return out_.slices.back().second;
    }

    bool streams_on(const ahcl::Port& p) const { return opt_.with_stream_protocol && p.stream; }

    void bind() {
        for (const auto& ch : c_.channels) {
            bindings_[ch.sender.str()].channel = &ch;
            bindings_[ch.sender.str()].sender = true;
            bindings_[ch.receiver.str()].channel = &ch;
            if (ch.mode == ahcl::ChannelMode::ready) complemented_.insert(ch.sender.str());
        }
        for (const auto& g : c_.collectives) {
            std::optional<int> nesting;
            for (const auto& m : g.members) {
                bindings_[m.str()].collective = &g;
                const ahcl::Port* p = c_.find_port(m);
                if (!p) throw UnboundPort("collective '" + g.id + "' lists unknown port '" + m.str() + "'");
                int n = p->stream ? p->nesting : -1;
                if (nesting && *nesting != n) {
                    throw ArityMismatch("collective '" + g.id + "' mixes nesting factors");
                }
                nesting = n;
            }
        }
        if (!opt_.with_stream_protocol) return;
        for (const auto& u : c_.units) {
            for (const ahcl::Port* p : u.all_ports()) {
                if (!p->stream) continue;
                auto var = stream_variable(c_, u.id, p->id);
                auto [it, fresh] = stream_vars_.emplace(var, p->nesting);
                if (!fresh && it->second != p->nesting) {
                    throw ArityMismatch("stream variable '" + var + "' mixes nesting factors");
                }
            }
        }
    }

    StreamVar var_of(const ahcl::Unit& u, const ahcl::Port& p) const {
        return {stream_variable(c_, u.id, p.id), p.nesting};
    }

    // ---- program structure ----

    void program_slice() {
        Builder b(slice("program"));
        b.place("program_running", 1);
        b.place("program_end_ready");
        b.place("program_end");
        b.net().add_final({"program_end", petri::FinalOp::ge, 1});

        auto nonrep = b.transition("nonrepetitive_join");
        b.arc("program_running", nonrep);
        b.arc(nonrep, "program_end_ready");
        auto all = b.transition("processes_all_join");
        b.arc("program_end_ready", all);
        b.arc(all, "program_end");

        for (const auto& u : c_.units) {
            b.place(started(u.id), 1);
            b.place(finished(u.id));
            if (u.kind == ahcl::UnitKind::non_repetitive) {
                b.arc(finished(u.id), nonrep);
                continue;
            }
            auto enabled = b.place(node("process_restart_enabled", {u.id}), 1);
            auto disabled = b.place(node("process_restart_disabled", {u.id}));
            auto restart = b.transition(node("process_restart", {u.id}));
            b.arc(finished(u.id), restart);
            b.read(enabled, restart);
            b.arc(restart, started(u.id));
            auto disable = b.transition(node("process_restart_disable", {u.id}));
            b.arc(enabled, disable);
            b.read("program_end_ready", disable);
            b.arc(disable, disabled);
            b.arc(disabled, all);
            b.arc(finished(u.id), all);
        }
    }

    // ---- ports ----

    // Arcs every communication transition of `p` carries: its own preparation, and for an
    // any-group member the preparations of the other members, which lose the race.
    void comm_arcs(const ahcl::Unit& u, const ahcl::Port& p, ArcList& pre, ArcList& post) const {
        auto name = port_name(u.id, p.id);
        pre.emplace_back(prepared(name), 1);
        post.emplace_back(complete(name), 1);
        if (complemented_.count(name)) post.emplace_back(unprepared(name), 1);
        const ahcl::Group* g = u.group_of(p.id);
        if (!g || g->kind != ahcl::GroupKind::any) return;
        for (const auto& m : g->members) {
            if (m.id == p.id) continue;
            auto other = port_name(u.id, m.id);
            pre.emplace_back(prepared(other), 1);
            if (complemented_.count(other)) post.emplace_back(unprepared(other), 1);
        }
    }

    static std::string comm_id(const ahcl::Unit& u, const ahcl::Port& p) {
        auto name = port_name(u.id, p.id);
        if (p.collective) return node("port_do", {name});
        return node(p.direction == ahcl::Direction::output ? "port_send" : "port_recv", {name});
    }

    static std::string comm_label(const ahcl::Unit& u, const ahcl::Port& p) {
        auto name = port_name(u.id, p.id);
        if (p.collective) return "do(" + name + ")";
        return name + (p.direction == ahcl::Direction::output ? "!" : "?");
    }

    void ports_slice(const ahcl::Unit& u) {
        Builder b(slice("ports:" + u.id));
        for (const ahcl::Port* p : u.all_ports()) {
            auto name = port_name(u.id, p->id);
            b.place(prepared(name));
            b.place(complete(name));
            if (complemented_.count(name)) b.place(unprepared(name), 1);

            Binding bind;
            if (auto it = bindings_.find(name); it != bindings_.end()) bind = it->second;
            bool streams = streams_on(*p);
            if (streams && opt_.with_order_consistency && p->nesting >= 1) {
                auto var = var_of(u, *p).id;
                auto t = b.transition(node("sp_activate_finalized", {name}));
                b.wire(t, {{prepared(name), 1}, {stream_flag(var, 0), 1}},
                       {{stream_flag(var, 0), 1}, {detail::order_fail_place(var), 1}});
            }

            ArcList pre, post;
            comm_arcs(u, *p, pre, post);
            petri::QualifierSet q;
            if (bind.channel) {
                // Streamed channel transitions are generated with the channel.
                if (streams) continue;
                if (bind.channel->mode != ahcl::ChannelMode::buffered) {
                    q.insert({std::string("comm"), bind.channel->id});
                }
            } else if (bind.collective) {
                if (streams) continue;
                q.insert({std::string("collective"), bind.collective->id});
            }
            if (!streams) {
                auto t = b.transition(comm_id(u, *p), comm_label(u, *p), q);
                b.wire(t, pre, post);
                continue;
            }
            for (const auto& v : detail::kind_variants({var_of(u, *p)}, opt_.with_order_consistency)) {
                auto t = b.transition(comm_id(u, *p) + v.suffix, comm_label(u, *p));
                b.wire(t, pre, post);
                b.wire(t, v.pre, v.post);
            }
        }
    }

    // ---- channels ----

    void channel_slice(const ahcl::Channel& ch) {
        Builder b(slice("channel:" + ch.id));
        const ahcl::Unit* su = c_.find_unit(ch.sender.unit);
        const ahcl::Unit* ru = c_.find_unit(ch.receiver.unit);
        const ahcl::Port* sp = c_.find_port(ch.sender);
        const ahcl::Port* rp = c_.find_port(ch.receiver);
        if (!su || !ru || !sp || !rp) throw UnboundPort("channel '" + ch.id + "' has an unknown endpoint");
        bool streams = streams_on(*sp) || streams_on(*rp);
        auto open = node("chan_ready_is_open", {ch.id});
        if (ch.mode == ahcl::ChannelMode::ready) b.place(open, 1);

        if (ch.mode == ahcl::ChannelMode::buffered) {
            int cap = ch.capacity.value_or(opt_.buffer_default);
            auto free = b.place(node("chan_buffer_free", {ch.id}), static_cast<unsigned>(cap));
            auto used = b.place(node("chan_buffer_used", {ch.id}));
            if (!streams) {
                auto s = b.transition(comm_id(*su, *sp), comm_label(*su, *sp));
                auto r = b.transition(comm_id(*ru, *rp), comm_label(*ru, *rp));
                b.arc(free, s);
                b.arc(s, used);
                b.arc(used, r);
                b.arc(r, free);
                return;
            }
            buffered_streams(b, ch, *su, *sp, *ru, *rp, cap, free, used);
            return;
        }

        if (!streams) {
            if (ch.mode == ahcl::ChannelMode::ready) {
                auto s = b.transition(comm_id(*su, *sp), comm_label(*su, *sp));
                b.read(open, s);
            }
            return;
        }
        ArcList pre, post;
        comm_arcs(*su, *sp, pre, post);
        comm_arcs(*ru, *rp, pre, post);
        std::vector<StreamVar> vars{var_of(*su, *sp)};
        if (var_of(*ru, *rp).id != vars.front().id) vars.push_back(var_of(*ru, *rp));
        auto label = join_labels({comm_label(*su, *sp), comm_label(*ru, *rp)});
        for (const auto& v : detail::kind_variants(vars, opt_.with_order_consistency)) {
            auto t = b.transition(node("comm", {ch.id}) + v.suffix, label);
            b.wire(t, pre, post);
            b.wire(t, v.pre, v.post);
            if (ch.mode == ahcl::ChannelMode::ready) b.read(open, t);
        }
    }

    // Slots form a ring; each remembers the kind of the value stored in it.
    void buffered_streams(Builder& b, const ahcl::Channel& ch, const ahcl::Unit& su, const ahcl::Port& sp,
                          const ahcl::Unit& ru, const ahcl::Port& rp, int cap, const std::string& free,
                          const std::string& used) {
        int n = sp.nesting;
        auto slot_flag = [&](int k, int i) { return node("buf_slot_flag", {ch.id, std::to_string(k), std::to_string(i)}); };
        auto slot_empty = [&](int k) { return node("buf_slot_empty", {ch.id, std::to_string(k)}); };
        auto write_pos = [&](int k) { return node("buf_write_pos", {ch.id, std::to_string(k)}); };
        auto read_pos = [&](int k) { return node("buf_read_pos", {ch.id, std::to_string(k)}); };
        for (int k = 0; k < cap; ++k) {
            b.place(slot_empty(k), 1);
            b.place(write_pos(k), k == 0 ? 1 : 0);
            b.place(read_pos(k), k == 0 ? 1 : 0);
            for (int i = 0; i <= n; ++i) b.place(slot_flag(k, i));
        }
        ArcList spre, spost, rpre, rpost;
        comm_arcs(su, sp, spre, spost);
        comm_arcs(ru, rp, rpre, rpost);
        for (int k = 0; k < cap; ++k) {
            int next = (k + 1) % cap;
            for (const auto& v : detail::kind_variants({var_of(su, sp)}, opt_.with_order_consistency)) {
                auto t = b.transition(comm_id(su, sp) + "#s" + std::to_string(k) + v.suffix, comm_label(su, sp));
                b.wire(t, spre, spost);
                b.wire(t, v.pre, v.post);
                b.wire(t, {{free, 1}, {slot_empty(k), 1}, {write_pos(k), 1}},
                       {{used, 1}, {slot_flag(k, v.kind), 1}, {write_pos(next), 1}});
            }
            for (int j = 0; j <= n; ++j) {
                for (const auto& v : detail::kind_variants({var_of(ru, rp)}, opt_.with_order_consistency, j)) {
                    auto t = b.transition(comm_id(ru, rp) + "#s" + std::to_string(k) + v.suffix, comm_label(ru, rp));
                    b.wire(t, rpre, rpost);
                    b.wire(t, v.pre, v.post);
                    b.wire(t, {{used, 1}, {slot_flag(k, j), 1}, {read_pos(k), 1}},
                           {{free, 1}, {slot_empty(k), 1}, {read_pos(next), 1}});
                }
            }
        }
    }

    void collective_slice(const ahcl::CollectiveGroup& g) {
        Builder b(slice("collective:" + g.id));
        bool streams = false;
        ArcList pre, post;
        std::vector<std::string> labels;
        std::vector<StreamVar> vars;
        for (const auto& m : g.members) {
            const ahcl::Unit* u = c_.find_unit(m.unit);
            const ahcl::Port* p = c_.find_port(m);
            if (!u || !p) throw UnboundPort("collective '" + g.id + "' lists unknown port '" + m.str() + "'");
            streams = streams || streams_on(*p);
            comm_arcs(*u, *p, pre, post);
            labels.push_back(comm_label(*u, *p));
            if (vars.empty() && p->stream) vars.push_back(var_of(*u, *p));
        }
        if (!streams) return;
        auto label = join_labels(labels);
        for (const auto& v : detail::kind_variants(vars, opt_.with_order_consistency)) {
            auto t = b.transition(node("coll_rendezvous", {g.id}) + v.suffix, label);
            b.wire(t, pre, post);
            b.wire(t, v.pre, v.post);
        }
    }

    // ---- protocol ----

    void unit_slice(const ahcl::Unit& u) {
        Builder b(slice("unit:" + u.id));
        b.place(started(u.id));
        b.place(finished(u.id));
        for (const auto& s : u.semaphores) b.place(node("sem_counter", {port_name(u.id, s)}));
        counter_ = 0;
        UnitFlow flow;
        flow.unit = u.id;
        flow.repetitive = u.kind == ahcl::UnitKind::repetitive;
        action(b, u, u.protocol, started(u.id), finished(u.id), 0, flow.root);
        out_.flows.push_back(std::move(flow));
    }

    const ahcl::Port& port_or_throw(const ahcl::Unit& u, const std::string& id) const {
        const ahcl::Port* p = u.find_port(id);
        if (!p) throw UnboundPort("unit '" + u.id + "' has no port '" + id + "'");
        return *p;
    }

    // Predicate names resolved to stream variables; empty when the predicate cannot be read from flags.
    std::vector<std::pair<std::string, StreamVar>> predicate_vars(const ahcl::Unit& u, const Action& a) const {
        std::vector<std::pair<std::string, StreamVar>> out;
        if (!opt_.with_stream_protocol) return out;
        for (const auto& name : a.predicate.ports()) {
            const ahcl::Port* p = nullptr;
            if (const ahcl::Group* g = u.find_group(name)) {
                if (!g->members.empty()) p = &g->members.front();
            } else {
                p = u.find_port(name);
            }
            if (!p || !p->stream) return {};
            out.emplace_back(name, var_of(u, *p));
        }
        return out;
    }

    // Decision transitions reading the flags of the predicate variables; one per flag combination.
    void guards(Builder& b, const ahcl::Unit& u, const Action& a, int depth, const std::string& from,
                const std::string& prefix, const std::string& label, const std::string& on_true,
                const std::string& on_false, std::vector<std::string>& ids) {
        auto named = predicate_vars(u, a);
        std::string fail = node("protocol_fail", {u.id});
        if (named.empty()) {
            auto t = b.transition(node(prefix + "_true", {label}));
            b.arc(from, t);
            b.arc(t, on_true);
            auto f = b.transition(node(prefix + "_false", {label}));
            b.arc(from, f);
            b.arc(f, on_false);
            ids.push_back(t);
            ids.push_back(f);
            return;
        }
        std::vector<StreamVar> vars;
        for (const auto& [name, v] : named) {
            if (std::none_of(vars.begin(), vars.end(), [&](const StreamVar& x) { return x.id == v.id; })) {
                vars.push_back(v);
            }
        }
        for (const auto& asg : detail::flag_assignments(vars)) {
            behavior::LastKinds last;
            for (const auto& [name, v] : named) {
                auto pos = std::find_if(vars.begin(), vars.end(), [&](const StreamVar& x) { return x.id == v.id; });
                last[name] = detail::kind_at(asg.index[pos - vars.begin()], v.n);
            }
            auto verdict = behavior::evaluate_stream_predicate(a.predicate, last, depth);
            std::string role = verdict == behavior::TriBool::true_    ? "_true"
                               : verdict == behavior::TriBool::false_ ? "_false"
                                                                      : "_fail";
            const std::string& target = verdict == behavior::TriBool::true_    ? on_true
                                        : verdict == behavior::TriBool::false_ ? on_false
                                                                               : fail;
            if (verdict == behavior::TriBool::fail) b.place(fail);
            auto t = b.transition(node(prefix + role, {label}) + asg.suffix);
            b.arc(from, t);
            b.arc(t, target);
            for (const auto& [p, w] : asg.reads) b.read(p, t);
            ids.push_back(t);
        }
    }

    void action(Builder& b, const ahcl::Unit& u, const Action& a, const std::string& S, const std::string& E,
                int depth, ActionNode& nd) {
        std::string l = u.id + ":" + std::to_string(counter_++);
        nd.kind = a.kind;
        nd.id = a.id;
        nd.polarity = a.polarity;
        nd.label = l;
        nd.start = S;
        nd.stop = E;
        b.place(S);
        b.place(E);
        auto inner = [&](const std::string& id) {
            nd.inner.push_back(id);
            return b.place(id);
        };
        auto child = [&](const Action& c, const std::string& s, const std::string& e, int d) {
            nd.children.emplace_back();
            action(b, u, c, s, e, d, nd.children.back());
        };

        switch (a.kind) {
        case ActionKind::skip:
            if (S != E) {
                petri::QualifierSet q{{std::string("skip"), l}};
                b.place(S, 0, q);
                b.place(E, 0, q);
            }
            break;
        case ActionKind::seq: {
            if (a.children.empty()) {
                petri::QualifierSet q{{std::string("skip"), l}};
                b.place(S, 0, q);
                b.place(E, 0, q);
                break;
            }
            std::string from = S;
            for (std::size_t i = 0; i < a.children.size(); ++i) {
                std::string to = i + 1 == a.children.size() ? E : inner(node("seq_mid", {l, std::to_string(i)}));
                child(a.children[i], from, to, depth);
                from = to;
            }
            break;
        }
        case ActionKind::par: {
            auto fork = b.transition(node("par_fork", {l}));
            auto join = b.transition(node("par_join", {l}));
            b.arc(S, fork);
            b.arc(join, E);
            for (std::size_t i = 0; i < a.children.size(); ++i) {
                auto s = inner(node("par_branch_start", {l, std::to_string(i)}));
                auto e = inner(node("par_branch_end", {l, std::to_string(i)}));
                b.arc(fork, s);
                b.arc(e, join);
                child(a.children[i], s, e, depth);
            }
            break;
        }
        case ActionKind::alt: {
            for (std::size_t i = 0; i < a.children.size(); ++i) {
                auto s = inner(node("alt_branch", {l, std::to_string(i)}));
                auto t = b.transition(node("alt_select_branch", {l, std::to_string(i)}));
                b.arc(S, t);
                b.arc(t, s);
                child(a.children[i], s, E, depth);
            }
            break;
        }
        case ActionKind::repeat_until: {
            auto check = inner(node("ru_checking_conditions", {l}));
            child(a.children[0], S, check, depth + 1);
            std::vector<std::string> ids;
            guards(b, u, a, depth, check, "ru", l, E, S, ids);
            break;
        }
        case ActionKind::repeat_forever:
            child(a.children[0], S, S, depth + 1);
            break;
        case ActionKind::repeat_counter: {
            if (a.count < 1) throw std::invalid_argument("repeat counter must be positive");
            auto n = static_cast<unsigned>(a.count);
            auto remaining = inner(node("rc_remaining", {l}));
            auto performed = inner(node("rc_performed", {l}));
            auto ready = inner(node("rc_ready", {l}));
            auto body = inner(node("rc_body", {l}));
            auto enter = b.transition(node("rc_enter", {l}));
            b.arc(S, enter);
            b.arc(enter, remaining, n);
            b.arc(enter, ready);
            auto iter = b.transition(node("rc_iter", {l}));
            b.arc(ready, iter);
            b.arc(remaining, iter);
            b.arc(iter, body);
            b.arc(iter, performed);
            auto exit = b.transition(node("rc_exit", {l}));
            b.arc(ready, exit);
            b.arc(performed, exit, n);
            b.arc(exit, E);
            child(a.children[0], body, ready, depth + 1);
            break;
        }
        case ActionKind::if_then_else: {
            auto then_start = inner(node("if_then_begin", {l}));
            auto else_start = inner(node("if_else_begin", {l}));
            std::vector<std::string> ids;
            guards(b, u, a, depth, S, "if", l, then_start, else_start, ids);
            child(a.children[0], then_start, E, depth + 1);
            child(a.children[1], else_start, E, depth + 1);
            break;
        }
        case ActionKind::signal:
        case ActionKind::wait: {
            if (std::find(u.semaphores.begin(), u.semaphores.end(), a.id) == u.semaphores.end()) {
                throw UnboundSemaphore("unit '" + u.id + "' has no semaphore '" + a.id + "'");
            }
            auto sem = b.place(node("sem_counter", {port_name(u.id, a.id)}));
            bool sig = a.kind == ActionKind::signal;
            auto t = b.transition(node(sig ? "sem_signal" : "sem_wait", {l}));
            b.arc(S, t);
            b.arc(t, E);
            if (sig) {
                b.arc(t, sem);
            } else {
                b.arc(sem, t);
            }
            break;
        }
        case ActionKind::activate:
        case ActionKind::do_collective:
            activation(b, u, a, S, E, l, nd);
            break;
        }
    }

    void activation(Builder& b, const ahcl::Unit& u, const Action& a, const std::string& S, const std::string& E,
                    const std::string& l, ActionNode& nd) {
        std::vector<const ahcl::Port*> targets;
        bool any = false;
        if (const ahcl::Group* g = u.find_group(a.id); g && a.kind == ActionKind::activate) {
            for (const auto& m : g->members) targets.push_back(&m);
            any = g->kind == ahcl::GroupKind::any;
        } else {
            targets.push_back(&port_or_throw(u, a.id));
        }
        auto on = b.place(node("activate_on", {l}));
        nd.inner.push_back(on);

        ArcList pre{{S, 1}}, post{{on, 1}};
        // Receivers on ready channels either find the sender waiting or close the channel for good.
        std::vector<std::pair<const ahcl::Channel*, std::string>> ready;
        for (const ahcl::Port* p : targets) {
            auto name = port_name(u.id, p->id);
            post.emplace_back(prepared(name), 1);
            if (complemented_.count(name)) pre.emplace_back(unprepared(name), 1);
            auto it = bindings_.find(name);
            if (it != bindings_.end() && it->second.channel && !it->second.sender &&
                it->second.channel->mode == ahcl::ChannelMode::ready) {
                ready.emplace_back(it->second.channel, it->second.channel->sender.str());
            }
        }
        std::string start = a.kind == ActionKind::do_collective ? "do_start" : "activate_start";
        std::size_t variants = std::size_t(1) << ready.size();
        for (std::size_t mask = 0; mask < variants; ++mask) {
            std::string id = node(start, {l});
            for (std::size_t i = 0; i < ready.size(); ++i) id += (mask >> i) & 1 ? "#early" : "#late";
            auto t = b.transition(id);
            b.wire(t, pre, post);
            for (std::size_t i = 0; i < ready.size(); ++i) {
                const auto& [ch, sender] = ready[i];
                if ((mask >> i) & 1) {
                    b.read(unprepared(sender), t);
                    b.arc(b.place(node("chan_ready_is_open", {ch->id})), t);
                } else {
                    b.read(prepared(sender), t);
                }
            }
        }

        std::string stop = a.kind == ActionKind::do_collective ? "do_stop" : "activate_stop";
        if (any) {
            for (std::size_t i = 0; i < targets.size(); ++i) {
                auto t = b.transition(node(stop, {l, std::to_string(i)}));
                b.wire(t, {{on, 1}, {complete(port_name(u.id, targets[i]->id)), 1}}, {{E, 1}});
            }
            return;
        }
        ArcList stop_pre{{on, 1}};
        for (const ahcl::Port* p : targets) stop_pre.emplace_back(complete(port_name(u.id, p->id)), 1);
        auto t = b.transition(node(stop, {l}));
        b.wire(t, stop_pre, {{E, 1}});
    }
};

}  // namespace

SliceSet translate_slices(const ahcl::Component& c, const TranslationOptions& opt) {
    return Translator(c, opt).run();
}

Translation translate(const ahcl::Component& c, const TranslationOptions& opt) {
    auto set = translate_slices(c, opt);
    std::vector<petri::InterlacedNet> nets;
    nets.reserve(set.slices.size());
    for (auto& [name, n] : set.slices) nets.push_back(std::move(n));
    return {petri::unfold(nets), std::move(set.flows)};
}

petri::InterlacedNet translate_component(const ahcl::Component& c, const TranslationOptions& opt) {
    return translate(c, opt).net;
}

}  // namespace hashnets::translate
