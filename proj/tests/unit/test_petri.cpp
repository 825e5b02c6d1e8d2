#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <random>
#include <regex>

#include "fixtures.hpp"
#include "random_net.hpp"
#include "hashnets/petri/dot.hpp"
#include "hashnets/petri/language.hpp"
#include "hashnets/petri/reach.hpp"
#include "hashnets/petri/token_game.hpp"
#include "hashnets/translate/translate.hpp"

using namespace hashnets;
using namespace hashnets::petri;

namespace {

InterlacedNet chain() {
    InterlacedNet n;
    n.add_place("p", {}, 1);
    n.add_place("q");
    n.add_transition("t", "a");
    n.add_arc("p", "t");
    n.add_arc("t", "q");
    n.add_final({"q", FinalOp::ge, 1});
    return n;
}

QualifierSet q(std::string concern, std::string owner, std::string role) {
    return {Qualifier{concern, owner, role}};
}

std::set<std::string> place_ids(const InterlacedNet& n) {
    std::set<std::string> out;
    for (const auto& p : n.places()) out.insert(p.id);
    return out;
}

std::set<std::string> transition_ids(const InterlacedNet& n) {
    std::set<std::string> out;
    for (const auto& t : n.transitions()) out.insert(t.id);
    return out;
}

// Place -> (transition -> weight) for both arc directions, independent of node order.
std::map<std::tuple<bool, std::string, std::string>, unsigned> arc_map(const InterlacedNet& n) {
    std::map<std::tuple<bool, std::string, std::string>, unsigned> out;
    for (const auto& a : n.arcs()) out[{a.from_place, n.places()[a.place].id, n.transitions()[a.transition].id}] += a.weight;
    return out;
}

Word words(std::initializer_list<const char*> w) {
    Word out;
    for (auto s : w) out.emplace_back(s);
    return out;
}

}  // namespace

// ---- construction and union ----

TEST(Net, ParallelArcsAccumulate) {
    InterlacedNet n;
    n.add_place("p");
    n.add_transition("t");
    n.add_arc("p", "t", 2);
    n.add_arc("p", "t", 1);
    ASSERT_EQ(n.arcs().size(), 1u);
    EXPECT_EQ(n.arcs()[0].weight, 3u);
    EXPECT_THROW(n.add_arc("p", "zz"), UnknownNode);
    EXPECT_THROW(n.add_arc("p", "p"), UnknownNode);
}

TEST(Net, LabelConflictOnReAdd) {
    InterlacedNet n;
    n.add_transition("t", "a");
    EXPECT_NO_THROW(n.add_transition("t", std::nullopt));
    EXPECT_THROW(n.add_transition("t", "b"), LabelConflict);
}

TEST(Union, EmptyNetIsIdentity) {
    auto a = chain();
    EXPECT_EQ(unite(a, InterlacedNet{}), a);
    EXPECT_EQ(unite(InterlacedNet{}, a), a);
}

TEST(Union, SharedQualifierKeepsBothPlacesUntilUnfold) {
    InterlacedNet a, b;
    a.add_place("x", q("chan", "c", "free"));
    b.add_place("y", q("chan", "c", "free"));
    auto u = unite(a, b);
    EXPECT_EQ(u.places().size(), 2u);
    EXPECT_EQ(unfold(u).places().size(), 1u);
}

TEST(Union, LabelConflictAcrossOperands) {
    InterlacedNet a, b;
    a.add_transition("t", "x");
    b.add_transition("t", "y");
    EXPECT_THROW((void)unite(a, b), LabelConflict);
}

TEST(Union, FixtureSlicesAddUp) {
    auto skip = translate::translate_component(hashnets::testing::load("protocols/skip.ahcl"));
    auto seq = translate::translate_component(hashnets::testing::load("protocols/seq2.ahcl"));
    // Rename one side so no ids are shared.
    InterlacedNet renamed;
    for (const auto& p : skip.places()) renamed.add_place("s_" + p.id, {}, skip.initial(skip.place_index(p.id).value()));
    for (const auto& t : skip.transitions()) renamed.add_transition("s_" + t.id, t.label);
    for (const auto& a : skip.arcs()) {
        auto pl = "s_" + skip.places()[a.place].id;
        auto tr = "s_" + skip.transitions()[a.transition].id;
        if (a.from_place) {
            renamed.add_arc(pl, tr, a.weight);
        } else {
            renamed.add_arc(tr, pl, a.weight);
        }
    }
    auto u = unite(renamed, seq);
    EXPECT_EQ(u.places().size(), skip.places().size() + seq.places().size());
    EXPECT_EQ(u.transitions().size(), skip.transitions().size() + seq.transitions().size());
    EXPECT_EQ(u.arcs().size(), skip.arcs().size() + seq.arcs().size());
}

TEST(Union, IdenticalArcsCountOnceAndMarkingsAdd) {
    InterlacedNet a, b;
    for (auto* n : {&a, &b}) {
        n->add_place("p", {}, 1);
        n->add_transition("t");
        n->add_arc("p", "t", 2);
    }
    auto u = unite(a, b);
    EXPECT_EQ(u.arcs()[0].weight, 2u);
    EXPECT_EQ(u.initial(0), 2u);
}

// ---- unfold ----

TEST(Unfold, SimpleSliceIsItself) {
    auto a = chain();
    EXPECT_EQ(unfold(a), a);
}

TEST(Unfold, MergesPlacesSharingAQualifier) {
    InterlacedNet a, b;
    a.add_place("free_a", q("chan", "c", "free"), 1);
    a.add_transition("send", "s!");
    a.add_arc("free_a", "send");
    b.add_place("free_b", q("chan", "c", "free"));
    b.add_transition("recv", "r?");
    b.add_arc("recv", "free_b");
    auto n = unfold(std::vector<InterlacedNet>{a, b});
    ASSERT_EQ(n.places().size(), 1u);
    EXPECT_EQ(n.places()[0].id, "free_a");
    EXPECT_EQ(n.initial(0), 1u);
    EXPECT_EQ(n.arcs().size(), 2u);
}

TEST(Unfold, MergesTransitionsTransitively) {
    InterlacedNet n;
    n.add_transition("a", std::nullopt, {Qualifier{"x"}});
    n.add_transition("b", std::nullopt, {Qualifier{"x"}, Qualifier{"y"}});
    n.add_transition("c", std::nullopt, {Qualifier{"y"}});
    n.add_transition("d", std::nullopt, {Qualifier{"z"}});
    auto u = unfold(n);
    EXPECT_EQ(transition_ids(u), (std::set<std::string>{"a", "d"}));
    EXPECT_EQ(u.transitions()[*u.transition_index("a")].qualifiers, (QualifierSet{Qualifier{"x"}, Qualifier{"y"}}));
}

TEST(Unfold, SortClash) {
    InterlacedNet n;
    n.add_place("p", {Qualifier{"same"}});
    n.add_transition("t", std::nullopt, {Qualifier{"same"}});
    EXPECT_THROW((void)unfold(n), SortClash);
}

TEST(Unfold, SynchronousChannelMergesCommunication) {
    auto c = ahcl::parse_configuration(R"(
      component pair {
        unit a { ports { out x; } protocol { x! } }
        unit b { ports { in x; } protocol { x? } }
        connect a.x -> b.x synchronous;
      })");
    auto slices = translate::translate_slices(c);
    std::size_t before = 0;
    InterlacedNet all;
    for (const auto& [name, s] : slices.slices) all = unite(all, s);
    for (const auto& t : all.transitions()) before += t.label && (*t.label == "a.x!" || *t.label == "b.x?");
    auto n = unfold(all);
    std::size_t after = 0;
    for (const auto& t : n.transitions()) after += t.label.has_value() && t.label->find("a.x!") != std::string::npos;
    EXPECT_EQ(before, 2u);
    EXPECT_EQ(after, 1u);
    EXPECT_LT(n.transitions().size(), all.transitions().size());
}

// ---- token game ----

TEST(TokenGame, Enabledness) {
    InterlacedNet n;
    n.add_place("p", {}, 1);
    n.add_transition("t");
    n.add_arc("p", "t");
    EXPECT_TRUE(enabled(n, n.initial_marking(), "t"));
    InterlacedNet w;
    w.add_place("p", {}, 2);
    w.add_transition("t");
    w.add_arc("p", "t", 3);
    EXPECT_FALSE(enabled(w, w.initial_marking(), "t"));
    EXPECT_THROW((void)enabled(w, w.initial_marking(), "zz"), UnknownTransition);
}

TEST(TokenGame, FiringRule) {
    auto n = chain();
    auto m = fire(n, n.initial_marking(), "t");
    EXPECT_EQ(named(n, m), (std::map<std::string, std::uint32_t>{{"q", 1}}));
    EXPECT_THROW((void)fire(n, m, "t"), NotEnabled);

    InterlacedNet loop;
    loop.add_place("p", {}, 1);
    loop.add_transition("t");
    loop.add_arc("p", "t");
    loop.add_arc("t", "p");
    EXPECT_EQ(fire(loop, loop.initial_marking(), "t"), loop.initial_marking());

    InterlacedNet w;
    w.add_place("p", {}, 5);
    w.add_place("q");
    w.add_transition("t");
    w.add_arc("p", "t", 2);
    w.add_arc("t", "q", 3);
    EXPECT_EQ(named(w, fire(w, w.initial_marking(), "t")), (std::map<std::string, std::uint32_t>{{"p", 3}, {"q", 3}}));
}

TEST(TokenGame, CounterFixtureEnablesWithThreeTokens) {
    auto n = translate::translate_component(hashnets::testing::load("protocols/counter3.ahcl"));
    auto rc = n.find_place("rc_remaining[u:0]");
    ASSERT_TRUE(rc.has_value());
    auto m = n.initial_marking();
    Marking cur = m;
    // Play until rc_remaining holds 3.
    for (int step = 0; step < 20 && cur[*rc] != 3; ++step) {
        auto en = enabled_transitions(n, cur);
        ASSERT_FALSE(en.empty());
        cur = fire(n, cur, en.front());
    }
    ASSERT_EQ(cur[*rc], 3u);
    bool consumer = false;
    for (auto t : enabled_transitions(n, cur)) {
        for (auto [p, w] : n.pre(t)) consumer = consumer || (p == *rc && w == 1);
    }
    EXPECT_TRUE(consumer);
}

// ---- reachability ----

TEST(Reach, TwoStateChain) {
    auto g = reachability_graph(chain());
    EXPECT_EQ(g.size(), 2u);
    EXPECT_EQ(g.stats.edges, 1u);
    EXPECT_FALSE(g.truncated);
    EXPECT_EQ(g.path_to(1), std::vector<std::uint32_t>{0});
}

TEST(Reach, LimitsTruncate) {
    InterlacedNet n;
    n.add_place("p", {}, 1);
    n.add_transition("t");
    n.add_arc("t", "p");
    auto g = reachability_graph(n, {.max_states = 10});
    EXPECT_TRUE(g.truncated);
    EXPECT_EQ(g.size(), 10u);
    auto d = reachability_graph(n, {.max_depth = 4});
    EXPECT_TRUE(d.truncated);
    EXPECT_EQ(d.size(), 5u);
}

TEST(Reach, CounterHasThreeLabelledStepsOnEveryPathToFinal) {
    auto n = translate::translate_component(hashnets::testing::load("protocols/counter3.ahcl"));
    auto g = reachability_graph(n);
    ASSERT_FALSE(g.truncated);
    // Count labelled edges on every root-to-final path by a DFS over the (acyclic) graph.
    std::set<int> counts;
    std::function<void(StateId, int)> walk = [&](StateId s, int a) {
        if (n.is_final(g.marking(s))) counts.insert(a);
        for (const auto& e : g.edges(s)) {
            const auto& lab = n.transitions()[e.transition].label;
            walk(e.target, a + (lab && *lab == "u.a!"));
        }
    };
    walk(0, 0);
    EXPECT_EQ(counts, (std::set<int>{3}));
}

namespace {

struct Naive {
    std::size_t states = 0;
    std::size_t edges = 0;
};

// Straight BFS over std::map, sharing nothing with ReachGraph.
Naive naive_reach(const InterlacedNet& n) {
    std::map<Marking, std::size_t> seen;
    std::deque<Marking> queue;
    Marking m0(n.places().size());
    for (std::size_t p = 0; p < m0.size(); ++p) m0[p] = n.initial(p);
    seen.emplace(m0, 0);
    queue.push_back(m0);
    Naive out;
    std::vector<std::vector<std::pair<std::size_t, unsigned>>> in(n.transitions().size()), outs(n.transitions().size());
    for (const auto& a : n.arcs()) (a.from_place ? in : outs)[a.transition].emplace_back(a.place, a.weight);
    while (!queue.empty()) {
        Marking m = std::move(queue.front());
        queue.pop_front();
        for (std::size_t t = 0; t < n.transitions().size(); ++t) {
            bool ok = true;
            for (auto [p, w] : in[t]) ok = ok && m[p] >= w;
            if (!ok) continue;
            Marking x = m;
            for (auto [p, w] : in[t]) x[p] -= w;
            for (auto [p, w] : outs[t]) x[p] += w;
            ++out.edges;
            if (seen.emplace(x, seen.size()).second) queue.push_back(std::move(x));
        }
    }
    out.states = seen.size();
    return out;
}

}  // namespace

TEST(Reach, DiningAThreeGoldenCountsMatchNaiveSearch) {
    auto text = hashnets::testing::slurp(hashnets::testing::fixture_dir() / "dining/dining_a.ahcl");
    text = std::regex_replace(text, std::regex("const N = 5"), "const N = 3");
    auto n = translate::translate_component(ahcl::parse_configuration(text));
    auto g = reachability_graph(n, {.max_states = 3'000'000});
    ASSERT_FALSE(g.truncated);
    EXPECT_EQ(g.size(), 249634u);
    EXPECT_EQ(g.stats.edges, 1004049u);
    auto naive = naive_reach(n);
    EXPECT_EQ(naive.states, g.size());
    EXPECT_EQ(naive.edges, g.stats.edges);
}

TEST(Reach, DepthFirstFindsTheSameStatesWhenComplete) {
    std::mt19937 rng(5);
    for (int i = 0; i < 40; ++i) {
        auto n = hashnets::testing::random_net(rng);
        auto bfs = reachability_graph(n);
        auto dfs = reachability_graph(n, {.order = SearchOrder::depth_first});
        ASSERT_EQ(bfs.size(), dfs.size());
        for (StateId s = 0; s < dfs.size(); ++s) {
            auto m = dfs.marking(s);
            ASSERT_TRUE(bfs.find(m).has_value());
            // Parent paths replay.
            Marking cur = n.initial_marking();
            for (auto t : dfs.path_to(s)) cur = fire(n, cur, t);
            EXPECT_EQ(cur, m);
        }
    }
}

// ---- languages ----

TEST(Language, TranslatedSmallProtocols) {
    auto lang = [](const char* f, bool prefix) {
        auto n = translate::translate_component(hashnets::testing::load(f));
        return prefix ? net_language(n, 8).words : terminal_language(n, 8).words;
    };
    EXPECT_EQ(lang("protocols/seq2.ahcl", false), (std::set<Word>{words({"u.a!", "u.b?"})}));
    EXPECT_EQ(lang("protocols/skip.ahcl", false), (std::set<Word>{Word{}}));
    EXPECT_EQ(lang("protocols/alt2.ahcl", false), (std::set<Word>{words({"u.a!"}), words({"u.b?"})}));
    EXPECT_EQ(lang("protocols/skip.ahcl", true), (std::set<Word>{Word{}}));
    EXPECT_EQ(lang("protocols/seq2.ahcl", true), (std::set<Word>{Word{}, words({"u.a!"}), words({"u.a!", "u.b?"})}));
    EXPECT_EQ(lang("protocols/par2.ahcl", true),
              (std::set<Word>{Word{}, words({"u.a!"}), words({"u.b!"}), words({"u.a!", "u.b!"}), words({"u.b!", "u.a!"})}));
}

TEST(Language, NeedsAFinalPredicate) {
    InterlacedNet n;
    n.add_place("p", {}, 1);
    EXPECT_THROW((void)terminal_language(n, 3), NoFinalMarking);
    EXPECT_EQ(net_language(n, 3).words, (std::set<Word>{Word{}}));
}

TEST(Language, SilentTransitionsAreErased) {
    InterlacedNet n;
    n.add_place("p", {}, 1);
    n.add_place("q");
    n.add_place("r");
    n.add_transition("tau");
    n.add_transition("t", "a");
    n.add_arc("p", "tau");
    n.add_arc("tau", "q");
    n.add_arc("q", "t");
    n.add_arc("t", "r");
    n.add_final({"r", FinalOp::eq, 1});
    EXPECT_EQ(terminal_language(n, 4).words, (std::set<Word>{words({"a"})}));
}

// ---- DOT ----

TEST(Dot, MentionsEveryNode) {
    auto n = chain();
    auto dot = net_to_dot(n);
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("label=\"p (1)\""), std::string::npos);
    EXPECT_NE(dot.find("label=\"q\""), std::string::npos);
    EXPECT_NE(dot.find("label=\"t / a\""), std::string::npos);
    auto rg = reach_to_dot(n, reachability_graph(n));
    EXPECT_NE(rg.find("->"), std::string::npos);
}

// ---- properties over random nets ----

TEST(PetriProperty, FiringConservesTokensPerArcWeights) {
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto n = hashnets::testing::random_net(rng, {.non_increasing = false});
        Marking m = n.initial_marking();
        for (int step = 0; step < 15; ++step) {
            auto en = enabled_transitions(n, m);
            if (en.empty()) break;
            auto t = en[std::uniform_int_distribution<std::size_t>(0, en.size() - 1)(rng)];
            auto next = fire(n, m, t);
            std::map<std::size_t, long long> delta;
            for (const auto& a : n.arcs()) {
                if (a.transition != t) continue;
                delta[a.place] += a.from_place ? -static_cast<long long>(a.weight) : a.weight;
            }
            for (std::size_t p = 0; p < m.size(); ++p) {
                EXPECT_EQ(static_cast<long long>(next[p]) - m[p], delta[p]);
            }
            m = next;
        }
    }
}

TEST(PetriProperty, EnabledIffEveryInputCoversItsWeight) {
    std::mt19937 rng(12);
    for (int i = 0; i < 200; ++i) {
        auto n = hashnets::testing::random_net(rng);
        Marking m(n.places().size());
        for (auto& x : m) x = std::uniform_int_distribution<unsigned>(0, 4)(rng);
        for (std::size_t t = 0; t < n.transitions().size(); ++t) {
            bool want = true;
            for (const auto& a : n.arcs()) {
                if (a.from_place && a.transition == t) want = want && m[a.place] >= a.weight;
            }
            EXPECT_EQ(enabled(n, m, t), want);
            if (!want) {
                EXPECT_THROW((void)fire(n, m, t), NotEnabled);
            }
        }
    }
}

TEST(PetriProperty, UnfoldIsIdempotent) {
    std::mt19937 rng(13);
    for (int i = 0; i < 100; ++i) {
        auto n = hashnets::testing::random_net(rng);
        // Sprinkle shared qualifiers so unfolding has something to merge.
        InterlacedNet q;
        for (const auto& p : n.places()) {
            q.add_place(p.id, {Qualifier{"g", static_cast<long long>(std::uniform_int_distribution<int>(0, 3)(rng))}},
                        n.initial(*n.place_index(p.id)));
        }
        for (const auto& t : n.transitions()) {
            QualifierSet qs;
            if (std::bernoulli_distribution(0.5)(rng)) qs.insert(Qualifier{"h", static_cast<long long>(std::uniform_int_distribution<int>(0, 2)(rng))});
            q.add_transition(t.id, std::nullopt, qs);
        }
        for (const auto& a : n.arcs()) {
            const auto& p = n.places()[a.place].id;
            const auto& t = n.transitions()[a.transition].id;
            a.from_place ? q.add_arc(p, t, a.weight) : q.add_arc(t, p, a.weight);
        }
        auto once = unfold(q);
        EXPECT_EQ(unfold(once), once) << "case " << i;
        EXPECT_EQ(unfold(n), n);
    }
}

TEST(PetriProperty, UnionIsCommutativeAndAssociativeOnNodeSets) {
    std::mt19937 rng(14);
    for (int i = 0; i < 100; ++i) {
        hashnets::testing::NetShape shape{.silent = 1.0};
        auto a = hashnets::testing::random_net(rng, shape);
        auto b = hashnets::testing::random_net(rng, shape);
        auto c = hashnets::testing::random_net(rng, shape);
        auto ab = unite(a, b);
        auto ba = unite(b, a);
        EXPECT_EQ(place_ids(ab), place_ids(ba));
        EXPECT_EQ(transition_ids(ab), transition_ids(ba));
        EXPECT_EQ(arc_map(ab), arc_map(ba));
        auto left = unite(unite(a, b), c);
        auto right = unite(a, unite(b, c));
        EXPECT_EQ(place_ids(left), place_ids(right));
        EXPECT_EQ(transition_ids(left), transition_ids(right));
    }
}

TEST(PetriProperty, NetLanguageIsPrefixClosed) {
    std::mt19937 rng(15);
    for (int i = 0; i < 100; ++i) {
        auto n = hashnets::testing::random_net(rng);
        for (std::size_t len : {0u, 2u, 4u}) {
            auto l = net_language(n, len).words;
            EXPECT_TRUE(l.count(Word{}));
            for (const auto& w : l) {
                EXPECT_LE(w.size(), len);
                if (!w.empty()) {
                    EXPECT_TRUE(l.count(Word(w.begin(), w.end() - 1)));
                }
            }
        }
    }
}

TEST(PetriProperty, ParallelReachEqualsSequential) {
    std::mt19937 rng(16);
    for (int i = 0; i < 60; ++i) {
        auto n = hashnets::testing::random_net(rng, {.max_places = 8, .max_transitions = 8, .max_tokens = 4});
        auto seq = reachability_graph(n, {.threads = 1});
        for (unsigned th : {2u, 4u}) {
            auto par = reachability_graph(n, {.threads = th});
            EXPECT_EQ(par, seq) << "case " << i << " threads " << th;
        }
    }
}
