#include "hashnets/petri/reach.hpp"

#include <algorithm>
#include <cstring>
#include <thread>

#include "hashnets/petri/token_game.hpp"

namespace hashnets::petri {

namespace {

constexpr std::uint32_t empty_slot = std::numeric_limits<std::uint32_t>::max();

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(v | 0x80));
        v >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint64_t get_varint(const std::uint8_t*& p) {
    std::uint64_t v = 0;
    int shift = 0;
    while (*p & 0x80) {
        v |= std::uint64_t(*p++ & 0x7f) << shift;
        shift += 7;
    }
    v |= std::uint64_t(*p++) << shift;
    return v;
}

// Sparse encoding: (gap to next non-empty place, count) pairs.
void encode(const Marking& m, std::vector<std::uint8_t>& out) {
    out.clear();
    std::size_t last = 0;
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (!m[p]) continue;
        put_varint(out, p - last);
        put_varint(out, m[p]);
        last = p;
    }
}

void decode(std::span<const std::uint8_t> code, Marking& m) {
    std::fill(m.begin(), m.end(), 0);
    const std::uint8_t* p = code.data();
    const std::uint8_t* end = p + code.size();
    std::size_t place = 0;
    while (p < end) {
        place += get_varint(p);
        m[place] = static_cast<std::uint32_t>(get_varint(p));
    }
}

std::uint64_t hash_bytes(std::span<const std::uint8_t> code) {
    std::uint64_t h = 1469598103934665603ull;
    for (auto b : code) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h ^ (h >> 29);
}

struct Successor {
    std::uint32_t transition;
    std::uint64_t hash;
    std::vector<std::uint8_t> code;
};

}  // namespace

std::span<const std::uint8_t> ReachGraph::bytes(StateId s) const {
    std::uint64_t begin = offsets_[s];
    std::uint64_t end = s + 1 < offsets_.size() ? offsets_[s + 1] : arena_.size();
    return {arena_.data() + begin, static_cast<std::size_t>(end - begin)};
}

Marking ReachGraph::marking(StateId s) const {
    Marking m(places_, 0);
    decode(bytes(s), m);
    return m;
}

std::uint32_t ReachGraph::tokens(StateId s, std::size_t place) const {
    auto code = bytes(s);
    const std::uint8_t* p = code.data();
    const std::uint8_t* end = p + code.size();
    std::size_t at = 0;
    while (p < end) {
        at += get_varint(p);
        auto count = static_cast<std::uint32_t>(get_varint(p));
        if (at == place) return count;
        if (at > place) return 0;
    }
    return 0;
}

std::span<const ReachEdge> ReachGraph::edges(StateId s) const {
    return {edges_.data() + edge_start_[s], edge_count_[s]};
}

std::optional<StateId> ReachGraph::lookup(std::span<const std::uint8_t> code, std::uint64_t h) const {
    if (slots_.empty()) return std::nullopt;
    std::size_t mask = slots_.size() - 1;
    for (std::size_t i = h & mask;; i = (i + 1) & mask) {
        std::uint32_t s = slots_[i];
        if (s == empty_slot) return std::nullopt;
        if (hashes_[s] != h) continue;
        auto b = bytes(s);
        if (b.size() == code.size() && std::equal(b.begin(), b.end(), code.begin())) return s;
    }
}

void ReachGraph::grow() {
    std::size_t cap = slots_.empty() ? 1024 : slots_.size() * 2;
    slots_.assign(cap, empty_slot);
    std::size_t mask = cap - 1;
    for (StateId s = 0; s < offsets_.size(); ++s) {
        std::size_t i = hashes_[s] & mask;
        while (slots_[i] != empty_slot) i = (i + 1) & mask;
        slots_[i] = s;
    }
}

StateId ReachGraph::insert(std::span<const std::uint8_t> code, std::uint64_t h) {
    if ((offsets_.size() + 1) * 2 > slots_.size()) grow();
    auto id = static_cast<StateId>(offsets_.size());
    offsets_.push_back(arena_.size());
    arena_.insert(arena_.end(), code.begin(), code.end());
    hashes_.push_back(h);
    edge_start_.push_back(0);
    edge_count_.push_back(0);
    depth_.push_back(0);
    expanded_.push_back(0);
    parent_.push_back(id);
    parent_transition_.push_back(0);
    std::size_t mask = slots_.size() - 1;
    std::size_t i = h & mask;
    while (slots_[i] != empty_slot) i = (i + 1) & mask;
    slots_[i] = id;
    return id;
}

std::optional<StateId> ReachGraph::find(const Marking& m) const {
    std::vector<std::uint8_t> code;
    encode(m, code);
    return lookup(code, hash_bytes(code));
}

std::optional<StateId> ReachGraph::parent(StateId s) const {
    if (s == 0) return std::nullopt;
    return parent_[s];
}

std::vector<std::uint32_t> ReachGraph::path_to(StateId s) const {
    std::vector<std::uint32_t> out;
    while (s != 0) {
        out.push_back(parent_transition_[s]);
        s = parent_[s];
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bool ReachGraph::operator==(const ReachGraph& o) const {
    if (size() != o.size() || truncated != o.truncated || places_ != o.places_) return false;
    for (StateId s = 0; s < size(); ++s) {
        auto a = bytes(s);
        auto b = o.bytes(s);
        if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) return false;
        auto ea = edges(s);
        auto eb = o.edges(s);
        if (!std::equal(ea.begin(), ea.end(), eb.begin(), eb.end())) return false;
        if (expanded_[s] != o.expanded_[s] || depth_[s] != o.depth_[s]) return false;
    }
    return true;
}

ReachGraph reachability_graph(const InterlacedNet& n, const ReachLimits& limits) {
    ReachGraph g;
    g.places_ = n.places().size();
    const std::size_t max_states = std::max<std::size_t>(limits.max_states, 1);
    unsigned threads = limits.threads ? limits.threads : std::max(1u, std::thread::hardware_concurrency());

    // Make the lazily compiled arc lists available before workers read them.
    for (std::size_t t = 0; t < n.transitions().size(); ++t) (void)n.pre(t);

    std::vector<std::uint8_t> code;
    encode(n.initial_marking(), code);
    g.insert(code, hash_bytes(code));

    auto expand = [&](StateId s, std::vector<Successor>& out, Marking& m, Marking& next) {
        out.clear();
        decode(g.bytes(s), m);
        for (std::size_t t = 0; t < n.transitions().size(); ++t) {
            bool ok = true;
            for (const auto& [p, w] : n.pre(t)) {
                if (m[p] < w) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            next = m;
            for (const auto& [p, w] : n.pre(t)) next[p] -= w;
            for (const auto& [p, w] : n.post(t)) next[p] += w;
            Successor succ{static_cast<std::uint32_t>(t), 0, {}};
            encode(next, succ.code);
            succ.hash = hash_bytes(succ.code);
            out.push_back(std::move(succ));
        }
    };

    if (limits.order == SearchOrder::depth_first) {
        std::vector<StateId> stack{0};
        std::vector<std::uint8_t> done(1, 0);
        std::vector<Successor> succs;
        Marking m(g.places_), next;
        while (!stack.empty()) {
            StateId s = stack.back();
            stack.pop_back();
            if (done[s]) continue;
            done[s] = 1;
            g.stats.peak_frontier = std::max(g.stats.peak_frontier, stack.size() + 1);
            g.stats.depth = std::max<std::size_t>(g.stats.depth, g.depth_[s]);
            if (g.depth_[s] >= limits.max_depth) {
                decode(g.bytes(s), m);
                if (!enabled_transitions(n, m).empty()) g.truncated = true;
                g.edge_start_[s] = g.edges_.size();
                continue;
            }
            expand(s, succs, m, next);
            g.edge_start_[s] = g.edges_.size();
            bool complete = true;
            std::vector<StateId> fresh;
            for (auto& succ : succs) {
                auto target = g.lookup(succ.code, succ.hash);
                if (!target) {
                    if (g.size() >= max_states) {
                        complete = false;
                        g.truncated = true;
                        continue;
                    }
                    target = g.insert(succ.code, succ.hash);
                    done.push_back(0);
                    g.depth_[*target] = g.depth_[s] + 1;
                    g.parent_[*target] = s;
                    g.parent_transition_[*target] = succ.transition;
                    fresh.push_back(*target);
                }
                g.edges_.push_back({succ.transition, *target});
            }
            g.edge_count_[s] = static_cast<std::uint32_t>(g.edges_.size() - g.edge_start_[s]);
            g.expanded_[s] = complete ? 1 : 0;
            stack.insert(stack.end(), fresh.rbegin(), fresh.rend());
        }
    }

    StateId level_begin = 0;
    StateId level_end = limits.order == SearchOrder::depth_first ? 0 : 1;
    std::size_t level = 0;
    bool full = false;
    constexpr std::size_t batch = 4096;
    std::vector<std::vector<Successor>> results;

    while (level_begin < level_end) {
        g.stats.peak_frontier = std::max<std::size_t>(g.stats.peak_frontier, level_end - level_begin);
        g.stats.depth = level;
        if (level >= limits.max_depth || full) {
            for (StateId s = level_begin; s < level_end; ++s) {
                Marking m(g.places_);
                decode(g.bytes(s), m);
                if (!enabled_transitions(n, m).empty()) g.truncated = true;
            }
            break;
        }
        for (StateId chunk = level_begin; chunk < level_end; chunk += batch) {
            StateId chunk_end = static_cast<StateId>(std::min<std::size_t>(level_end, std::size_t(chunk) + batch));
            std::size_t count = chunk_end - chunk;
            results.resize(count);
            // Successors are computed in parallel; insertion below stays sequential so ids are canonical.
            unsigned workers = std::min<std::size_t>(threads, count);
            if (workers <= 1) {
                Marking m(g.places_), next;
                for (std::size_t i = 0; i < count; ++i) expand(chunk + i, results[i], m, next);
            } else {
                std::vector<std::thread> pool;
                for (unsigned w = 0; w < workers; ++w) {
                    pool.emplace_back([&, w] {
                        Marking m(g.places_), next;
                        for (std::size_t i = w; i < count; i += workers) expand(chunk + i, results[i], m, next);
                    });
                }
                for (auto& th : pool) th.join();
            }
            for (std::size_t i = 0; i < count; ++i) {
                StateId s = chunk + static_cast<StateId>(i);
                g.edge_start_[s] = g.edges_.size();
                bool complete = true;
                for (auto& succ : results[i]) {
                    auto target = g.lookup(succ.code, succ.hash);
                    if (!target) {
                        if (g.size() >= max_states) {
                            complete = false;
                            full = true;
                            g.truncated = true;
                            continue;
                        }
                        target = g.insert(succ.code, succ.hash);
                        g.depth_[*target] = static_cast<std::uint32_t>(level + 1);
                        g.parent_[*target] = s;
                        g.parent_transition_[*target] = succ.transition;
                    }
                    g.edges_.push_back({succ.transition, *target});
                }
                g.edge_count_[s] = static_cast<std::uint32_t>(g.edges_.size() - g.edge_start_[s]);
                g.expanded_[s] = complete ? 1 : 0;
            }
        }
        level_begin = level_end;
        level_end = static_cast<StateId>(g.size());
        ++level;
    }

    g.stats.states = g.size();
    g.stats.edges = g.edges_.size();
    g.stats.bytes = g.arena_.capacity() + g.edges_.capacity() * sizeof(ReachEdge) +
                    g.slots_.capacity() * sizeof(std::uint32_t) +
                    g.size() * (sizeof(std::uint64_t) * 3 + sizeof(std::uint32_t) * 4 + 1);
    return g;
}

}  // namespace hashnets::petri
