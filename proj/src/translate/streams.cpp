#include "streams.hpp"

#include <algorithm>

#include "hashnets/translate/translate.hpp"

namespace hashnets::translate {

std::string stream_flag(const std::string& var, int index) {
    return detail::node("stream_port_flag", {var, std::to_string(index)});
}

std::string stream_flag_dual(const std::string& var, int index) {
    return detail::node("stream_port_flag_dual", {var, std::to_string(index)});
}

}  // namespace hashnets::translate

namespace hashnets::translate::detail {

behavior::StreamKind kind_at(int index, int n) {
    return index >= n ? behavior::StreamKind::value() : behavior::StreamKind::eos(index);
}

int index_of(behavior::StreamKind k, int n) { return k.data ? n : k.level; }

std::string fresh_place(const std::string& var) { return node("sp_fresh", {var}); }
std::string started_place(const std::string& var) { return node("sp_started", {var}); }
std::string order_fail_place(const std::string& var) { return node("sp_order_fail", {var}); }

namespace {

constexpr int fresh = -1;

bool allowed(int old, int next, int n, bool order) {
    if (!order) return true;
    auto set = old == fresh ? behavior::valid_initial(n) : behavior::valid_successors(kind_at(old, n), n);
    return set.count(kind_at(next, n)) != 0;
}

void move_flags(const StreamVar& v, int old, int next, bool order, ArcList& pre, ArcList& post) {
    if (old == fresh) {
        pre.emplace_back(fresh_place(v.id), 1);
        post.emplace_back(started_place(v.id), 1);
        old = v.n;
    } else if (order) {
        pre.emplace_back(started_place(v.id), 1);
        post.emplace_back(started_place(v.id), 1);
    }
    if (old == next) {
        pre.emplace_back(stream_flag(v.id, old), 1);
        post.emplace_back(stream_flag(v.id, old), 1);
        return;
    }
    pre.emplace_back(stream_flag(v.id, old), 1);
    pre.emplace_back(stream_flag_dual(v.id, next), 1);
    post.emplace_back(stream_flag(v.id, next), 1);
    post.emplace_back(stream_flag_dual(v.id, old), 1);
}

}  // namespace

std::vector<KindVariant> kind_variants(const std::vector<StreamVar>& vars, bool order, std::optional<int> fixed) {
    std::vector<KindVariant> out;
    if (vars.empty()) return out;
    int n = vars.front().n;
    int lo = fixed ? *fixed : 0;
    int hi = fixed ? *fixed : n;
    for (int next = lo; next <= hi; ++next) {
        std::vector<int> olds(vars.size(), order ? fresh : 0);
        for (;;) {
            bool ok = true;
            for (std::size_t i = 0; i < vars.size(); ++i) ok = ok && allowed(olds[i], next, vars[i].n, order);
            if (ok) {
                KindVariant v;
                v.kind = next;
                v.suffix = "#k" + std::to_string(next);
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    v.suffix += olds[i] == fresh ? "f" : "o" + std::to_string(olds[i]);
                    move_flags(vars[i], olds[i], next, order, v.pre, v.post);
                }
                out.push_back(std::move(v));
            }
            std::size_t i = 0;
            while (i < vars.size() && olds[i] == vars[i].n) {
                olds[i] = order ? fresh : 0;
                ++i;
            }
            if (i == vars.size()) break;
            ++olds[i];
        }
    }
    return out;
}

void declare_stream_variable(Builder& b, const StreamVar& v, bool order) {
    for (int i = 0; i <= v.n; ++i) {
        b.place(stream_flag(v.id, i), i == v.n ? 1 : 0);
        b.place(stream_flag_dual(v.id, i), i == v.n ? 0 : 1);
    }
    if (order) {
        b.place(fresh_place(v.id), 1);
        b.place(started_place(v.id));
        b.place(order_fail_place(v.id));
    }
}

std::vector<FlagAssignment> flag_assignments(const std::vector<StreamVar>& vars) {
    std::vector<FlagAssignment> out;
    std::vector<int> idx(vars.size(), 0);
    for (;;) {
        FlagAssignment a;
        a.index = idx;
        a.suffix = "#";
        for (std::size_t i = 0; i < vars.size(); ++i) {
            a.suffix += (i ? "_" : "") + std::to_string(idx[i]);
            a.reads.emplace_back(stream_flag(vars[i].id, idx[i]), 1);
        }
        out.push_back(std::move(a));
        std::size_t i = 0;
        while (i < vars.size() && idx[i] == vars[i].n) {
            idx[i] = 0;
            ++i;
        }
        if (i == vars.size()) break;
        ++idx[i];
    }
    return out;
}

}  // namespace hashnets::translate::detail
