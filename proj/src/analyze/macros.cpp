#include <algorithm>
#include <functional>
#include <map>

#include "builtins.hpp"
#include "hashnets/analyze/regions.hpp"

namespace hashnets::analyze {

const std::vector<std::string>& builtin_macros() {
    static const std::vector<std::string> names{
        "sender_prepared", "receiver_prepared", "sender_ready",       "receiver_ready",
        "rendezvous",      "buffer_full",       "buffer_empty",       "sender_blocked",
        "receiver_blocked", "port_pair_prepared", "group_prepared",   "prepared",
        "possesses",
    };
    return names;
}

}  // namespace hashnets::analyze

namespace hashnets::analyze::detail {

std::string text(const Value& v) {
    if (const auto* n = std::get_if<long long>(&v)) return std::to_string(*n);
    return std::get<std::string>(v);
}

namespace {

const ahcl::Component& component(const ModelContext& ctx, const std::string& macro) {
    if (!ctx.component) throw UnknownMacro("macro '" + macro + "' needs the source configuration");
    return *ctx.component;
}

const ahcl::Channel& channel(const ModelContext& ctx, const std::string& macro, const std::string& id) {
    const ahcl::Channel* ch = component(ctx, macro).find_channel(id);
    if (!ch) throw UnknownChannel("unknown channel '" + id + "'");
    return *ch;
}

ahcl::PortRef split(const std::string& ref) {
    auto dot = ref.find('.');
    if (dot == std::string::npos) throw UnknownPortRef("expected unit.port, got '" + ref + "'");
    return {ref.substr(0, dot), ref.substr(dot + 1)};
}

CtlPtr prepared_place(const ModelContext& ctx, const ahcl::PortRef& p) {
    return ctl_place(ctx.net, "port_prepared[" + p.str() + "]");
}

CtlPtr group_or_port(const ModelContext& ctx, const std::string& macro, const std::string& ref, bool group_only) {
    auto pr = split(ref);
    const ahcl::Unit* u = component(ctx, macro).find_unit(pr.unit);
    if (!u) throw UnknownPortRef("unknown unit '" + pr.unit + "'");
    if (const ahcl::Group* g = u->find_group(pr.port)) {
        std::vector<CtlPtr> parts;
        for (const auto& m : g->members) parts.push_back(prepared_place(ctx, {u->id, m.id}));
        return g->kind == ahcl::GroupKind::all ? ctl_all(parts) : ctl_any(parts);
    }
    if (group_only || !u->find_port(pr.port)) throw UnknownPortRef("unknown group '" + ref + "'");
    return prepared_place(ctx, pr);
}

CtlPtr negate(CtlPtr f) { return ctl_unary(CtlOp::not_, std::move(f)); }

}  // namespace

std::optional<CtlPtr> builtin(const std::string& name, const std::vector<Value>& args, const ModelContext& ctx) {
    const auto& names = builtin_macros();
    if (std::find(names.begin(), names.end(), name) == names.end()) return std::nullopt;
    std::size_t want = name == "possesses" ? 3 : 1;
    if (args.size() != want) {
        throw MacroArityMismatch("macro '" + name + "' takes " + std::to_string(want) + " argument(s)");
    }
    std::string a0 = text(args[0]);

    if (name == "prepared") return group_or_port(ctx, name, a0, false);
    if (name == "group_prepared") return group_or_port(ctx, name, a0, true);
    if (name == "possesses") {
        if (!ctx.flows) throw UnknownMacro("macro 'possesses' needs the translation structure");
        const ahcl::Unit* u = component(ctx, name).find_unit(a0);
        if (!u) throw UnknownPortRef("unknown unit '" + a0 + "'");
        auto flow = std::find_if(ctx.flows->begin(), ctx.flows->end(),
                                 [&](const translate::UnitFlow& f) { return f.unit == a0; });
        if (flow == ctx.flows->end()) throw UnknownPortRef("no protocol recorded for unit '" + a0 + "'");
        std::vector<CtlPtr> parts;
        for (const auto& p : possession_region(*u, *flow, text(args[1]), text(args[2]))) {
            if (ctx.net.find_place(p)) parts.push_back(ctl_place(ctx.net, p));
        }
        return ctl_any(parts);
    }
    if (name == "port_pair_prepared") {
        auto pr = split(a0);
        for (const auto& ch : component(ctx, name).channels) {
            if (ch.sender == pr) return prepared_place(ctx, ch.receiver);
            if (ch.receiver == pr) return prepared_place(ctx, ch.sender);
        }
        throw UnknownPortRef("port '" + a0 + "' is not bound to a channel");
    }

    const ahcl::Channel& ch = channel(ctx, name, a0);
    bool buffered = ch.mode == ahcl::ChannelMode::buffered;
    auto sender = [&] { return prepared_place(ctx, ch.sender); };
    auto receiver = [&] { return prepared_place(ctx, ch.receiver); };
    auto full = [&] {
        if (!buffered) throw UnknownChannel("channel '" + ch.id + "' is not buffered");
        return negate(ctl_place(ctx.net, "chan_buffer_free[" + ch.id + "]"));
    };
    auto empty = [&] {
        if (!buffered) throw UnknownChannel("channel '" + ch.id + "' is not buffered");
        return negate(ctl_place(ctx.net, "chan_buffer_used[" + ch.id + "]"));
    };
    if (name == "sender_prepared" || name == "sender_ready") return sender();
    if (name == "receiver_prepared" || name == "receiver_ready") return receiver();
    if (name == "rendezvous") return ctl_binary(CtlOp::and_, sender(), receiver());
    if (name == "buffer_full") return full();
    if (name == "buffer_empty") return empty();
    if (name == "sender_blocked") {
        if (ch.mode == ahcl::ChannelMode::ready) {
            // Also blocked once an early receiver has closed the channel.
            auto closed = negate(ctl_place(ctx.net, "chan_ready_is_open[" + ch.id + "]"));
            return ctl_binary(CtlOp::and_, sender(), ctl_binary(CtlOp::or_, negate(receiver()), closed));
        }
        return ctl_binary(CtlOp::and_, sender(), buffered ? full() : negate(receiver()));
    }
    if (name == "receiver_blocked") {
        return ctl_binary(CtlOp::and_, receiver(), buffered ? empty() : negate(sender()));
    }
    return std::nullopt;
}

}  // namespace hashnets::analyze::detail
