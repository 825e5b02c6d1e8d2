#include "hashnets/petri/language.hpp"

#include <deque>
#include <map>
#include <unordered_set>

namespace hashnets::petri {

namespace {

// Words are interned as nodes of a prefix tree so (state, word) pairs stay small.
struct Trie {
    std::vector<std::uint32_t> parent{0};
    std::vector<std::uint32_t> symbol{0};
    std::vector<std::uint32_t> length{0};
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> child;

    std::uint32_t extend(std::uint32_t node, std::uint32_t sym) {
        auto [it, fresh] = child.emplace(std::make_pair(node, sym), static_cast<std::uint32_t>(parent.size()));
        if (fresh) {
            parent.push_back(node);
            symbol.push_back(sym);
            length.push_back(length[node] + 1);
        }
        return it->second;
    }
};

LanguageResult explore(const InterlacedNet& n, const ReachGraph& g, std::size_t maxlen, bool terminal) {
    std::vector<std::string> symbols;
    std::map<std::string, std::uint32_t> symbol_ids;
    std::vector<std::int64_t> label_of(n.transitions().size(), -1);
    for (std::size_t t = 0; t < n.transitions().size(); ++t) {
        const auto& l = n.transitions()[t].label;
        if (!l) continue;
        auto [it, fresh] = symbol_ids.emplace(*l, static_cast<std::uint32_t>(symbols.size()));
        if (fresh) symbols.push_back(*l);
        label_of[t] = it->second;
    }

    Trie trie;
    std::set<std::uint32_t> accepted;
    std::unordered_set<std::uint64_t> seen;
    std::deque<std::pair<StateId, std::uint32_t>> queue;
    LanguageResult out;

    auto visit = [&](StateId s, std::uint32_t w) {
        std::uint64_t key = (std::uint64_t(s) << 32) | w;
        if (seen.insert(key).second) queue.emplace_back(s, w);
    };
    visit(0, 0);
    while (!queue.empty()) {
        auto [s, w] = queue.front();
        queue.pop_front();
        if (!terminal || n.is_final(g.marking(s))) accepted.insert(w);
        if (!g.expanded(s)) out.truncated = true;
        for (const auto& e : g.edges(s)) {
            auto sym = label_of[e.transition];
            if (sym < 0) {
                visit(e.target, w);
            } else if (trie.length[w] < maxlen) {
                visit(e.target, trie.extend(w, static_cast<std::uint32_t>(sym)));
            }
        }
    }
    for (auto w : accepted) {
        Word word(trie.length[w]);
        for (auto node = w; node != 0; node = trie.parent[node]) word[trie.length[node] - 1] = symbols[trie.symbol[node]];
        out.words.insert(std::move(word));
    }
    return out;
}

}  // namespace

LanguageResult terminal_language(const InterlacedNet& n, const ReachGraph& g, std::size_t maxlen) {
    if (!n.final_predicate()) throw NoFinalMarking("net has no final-marking predicate");
    return explore(n, g, maxlen, true);
}

LanguageResult net_language(const InterlacedNet& n, const ReachGraph& g, std::size_t maxlen) {
    return explore(n, g, maxlen, false);
}

LanguageResult terminal_language(const InterlacedNet& n, std::size_t maxlen, const ReachLimits& limits) {
    if (!n.final_predicate()) throw NoFinalMarking("net has no final-marking predicate");
    return explore(n, reachability_graph(n, limits), maxlen, true);
}

LanguageResult net_language(const InterlacedNet& n, std::size_t maxlen, const ReachLimits& limits) {
    return explore(n, reachability_graph(n, limits), maxlen, false);
}

}  // namespace hashnets::petri
