#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "hashnets/ahcl/ast.hpp"
#include "hashnets/behavior/stream.hpp"
#include "hashnets/behavior/traces.hpp"

using namespace hashnets;
using namespace hashnets::behavior;

namespace {

const StreamKind D = StreamKind::value();
StreamKind E(int k) { return StreamKind::eos(k); }

// Ports "b" and "c" are inputs, every other listed port an output.
ahcl::Unit unit_with(Action protocol, std::vector<std::string> outs, std::vector<std::string> sems = {},
                     std::vector<std::pair<std::string, int>> streams = {}) {
    ahcl::Unit u;
    u.id = "u";
    for (auto& o : outs) {
        ahcl::Port p;
        p.id = o;
        p.direction = o == "b" || o == "c" ? ahcl::Direction::input : ahcl::Direction::output;
        u.ports.push_back(p);
    }
    for (auto& [id, n] : streams) {
        ahcl::Port p;
        p.id = id;
        p.direction = ahcl::Direction::input;
        p.stream = true;
        p.nesting = n;
        u.ports.push_back(p);
    }
    u.semaphores = std::move(sems);
    u.protocol = std::move(protocol);
    return u;
}

Trace word(std::initializer_list<const char*> syms) {
    Trace t;
    for (auto s : syms) t.emplace_back(s);
    return t;
}

}  // namespace

// ---- stream_flatten ----

TEST(StreamFlatten, SingleValueWithoutNesting) {
    auto tree = parse_value_tree("7");
    EXPECT_EQ(stream_flatten(tree, 0), std::vector<StreamKind>{D});
}

TEST(StreamFlatten, EmptyListIsJustTheTerminator) {
    EXPECT_EQ(stream_flatten(parse_value_tree("[]"), 1), std::vector<StreamKind>{E(0)});
}

TEST(StreamFlatten, HandFlattenedFourLevelPrefix) {
    // Hand-derived: every list at depth k closes with EOS k.
    auto got = stream_flatten(parse_value_tree("[[[[1],[5,6]],[[2,3]]],[]]"), 4);
    std::vector<StreamKind> want{D, E(3), D, D, E(3), E(2), D, D, E(3), E(2), E(1), E(1), E(0)};
    EXPECT_EQ(got, want);
}

TEST(StreamFlatten, LeafAboveOrBelowNestingIsRejected) {
    EXPECT_THROW((void)stream_flatten(parse_value_tree("[[1]]"), 1), DepthExceeded);
    EXPECT_THROW((void)stream_flatten(parse_value_tree("[1,[2]]"), 2), DepthExceeded);
}

TEST(StreamFlatten, PrintedSequenceBreaksSuccessorRule) {
    // The 29-kind sequence printed for the four-level example list.
    std::vector<StreamKind> printed{D, E(3), D, D, E(3), E(1), D, D, E(3), E(2), E(1), E(1), D, D, D,
                                    E(3), D, D, E(3), E(2), E(1), D, E(3), D, D, E(3), E(2), E(1), E(0)};
    ASSERT_EQ(printed.size(), 29u);
    std::size_t first_bad = printed.size();
    for (std::size_t i = 0; i + 1 < printed.size(); ++i) {
        if (!valid_successors(printed[i], 4).count(printed[i + 1])) {
            first_bad = i;
            break;
        }
    }
    ASSERT_EQ(first_bad, 4u);
    EXPECT_EQ(printed[4], E(3));
    EXPECT_EQ(printed[5], E(1));
}

TEST(StreamFlatten, ExampleListNestsDeeperThanFour) {
    auto tree = parse_value_tree("[[[[1],[5,6]],[[2,3]]],[],[[[[4,5,7],[8,9]]],[[6],[7,9]]]]");
    EXPECT_THROW((void)stream_flatten(tree, 4), DepthExceeded);
    EXPECT_NO_THROW((void)stream_flatten(parse_value_tree("[[[[[1]]]]]"), 5));
}

TEST(StreamFlatten, MalformedListThrows) {
    EXPECT_THROW((void)parse_value_tree("[1,"), std::invalid_argument);
    EXPECT_THROW((void)parse_value_tree("[1]]"), std::invalid_argument);
}

// ---- valid_successors against brute force ----

namespace {

// All trees of exactly nesting n with at most `width` children per list.
std::vector<std::string> all_trees(int depth, int n, int width) {
    if (depth == n) return {"x"};
    auto kids = all_trees(depth + 1, n, width);
    std::vector<std::string> out{"[]"};
    std::vector<std::string> rows{""};
    for (int w = 1; w <= width; ++w) {
        std::vector<std::string> next;
        for (const auto& r : rows) {
            for (const auto& k : kids) next.push_back(r.empty() ? k : r + "," + k);
        }
        for (const auto& r : next) out.push_back("[" + r + "]");
        rows = std::move(next);
    }
    return out;
}

}  // namespace

TEST(ValidSuccessors, Examples) {
    EXPECT_EQ(valid_successors(E(2), 4), (std::set<StreamKind>{D, E(1), E(2), E(3)}));
    EXPECT_TRUE(valid_successors(E(0), 4).empty());
    EXPECT_EQ(valid_successors(D, 1), (std::set<StreamKind>{D, E(0)}));
}

TEST(ValidSuccessors, MatchesEveryAdjacentPairOfSmallStreams) {
    for (int n = 1; n <= 3; ++n) {
        std::map<StreamKind, std::set<StreamKind>> seen;
        std::set<StreamKind> first;
        for (const auto& text : all_trees(0, n, n == 3 ? 2 : 3)) {
            auto kinds = stream_flatten(parse_value_tree(text), n);
            ASSERT_EQ(kinds.back(), E(0));
            first.insert(kinds.front());
            seen[kinds.back()];
            for (std::size_t i = 0; i + 1 < kinds.size(); ++i) seen[kinds[i]].insert(kinds[i + 1]);
        }
        EXPECT_EQ(first, valid_initial(n)) << "n=" << n;
        for (const auto& [k, succ] : seen) {
            EXPECT_EQ(succ, valid_successors(k, n)) << "n=" << n << " after " << to_string(k);
        }
    }
}

TEST(StreamKinds, ParseAndPrint) {
    EXPECT_EQ(parse_kind("data"), D);
    EXPECT_EQ(parse_kind("EOS 2"), E(2));
    EXPECT_EQ(parse_kind("EOS12"), E(12));
    EXPECT_FALSE(parse_kind("EOS"));
    EXPECT_FALSE(parse_kind("EOSx"));
    EXPECT_EQ(to_string(E(3)), "EOS3");
}

// ---- stream predicates against a truth table ----

namespace {

// Reference: variable true iff eos(i) with i <= d; True beats Fail beats False.
TriBool reference(const StreamPredicate& p, const LastKinds& last, int d) {
    auto holds = [&](const std::string& v) {
        const auto& k = last.at(v);
        return k && !k->data && k->level <= d;
    };
    bool any = false;
    bool mixed = false;
    for (const auto& c : p.disjuncts) {
        bool all = true;
        bool some = false;
        for (const auto& v : c.ports) {
            all = all && holds(v);
            some = some || holds(v);
        }
        any = any || all;
        if (c.bracketed && some && !all) mixed = true;
    }
    if (any) return TriBool::true_;
    return mixed ? TriBool::fail : TriBool::false_;
}

}  // namespace

TEST(StreamPredicate, Examples) {
    EXPECT_EQ(evaluate_stream_predicate(var("p"), {{"p", D}}, 0), TriBool::false_);
    StreamPredicate ab{{{true, {"a", "b"}}}};
    EXPECT_EQ(evaluate_stream_predicate(ab, {{"a", E(0)}, {"b", E(0)}}, 0), TriBool::true_);
    EXPECT_EQ(evaluate_stream_predicate(ab, {{"a", E(0)}, {"b", D}}, 0), TriBool::fail);
}

TEST(StreamPredicate, TruthTableOverAllKindPairs) {
    std::vector<std::optional<StreamKind>> kinds{std::nullopt, D, E(0), E(1), E(2)};
    std::vector<StreamPredicate> preds{
        {{{true, {"a", "b"}}}},
        {{{false, {"a", "b"}}}},
        {{{true, {"a", "b"}}, {false, {"c"}}}},
        {{{false, {"a"}}, {true, {"b", "c"}}}},
    };
    for (const auto& p : preds) {
        for (int d = 0; d <= 2; ++d) {
            for (auto a : kinds) {
                for (auto b : kinds) {
                    for (auto c : kinds) {
                        LastKinds last{{"a", a}, {"b", b}, {"c", c}};
                        EXPECT_EQ(evaluate_stream_predicate(p, last, d), reference(p, last, d));
                    }
                }
            }
        }
    }
}

TEST(StreamPredicate, UnknownPortAndNeverActivatedPolicy) {
    EXPECT_THROW((void)evaluate_stream_predicate(var("zz"), {{"p", D}}, 0), UnknownPort);
    LastKinds last{{"p", std::nullopt}};
    EXPECT_EQ(evaluate_stream_predicate(var("p"), last, 0), TriBool::false_);
    EXPECT_EQ(evaluate_stream_predicate(var("p"), last, 0, NeverActivated::as_fail), TriBool::fail);
}

// ---- enumerate_traces ----

TEST(Traces, SeqIsASingleInterleaving) {
    auto u = unit_with(seq({send("a"), receive("b")}), {"a", "b"});
    ASSERT_EQ(u.ports[1].direction, ahcl::Direction::input);
    auto t = enumerate_traces(u, {}, 8);
    EXPECT_EQ(t.complete, (std::set<Trace>{word({"u.a!", "u.b?"})}));
}

TEST(Traces, ParIsTheShuffle) {
    auto u = unit_with(par({send("a"), send("d")}), {"a", "d"});
    auto t = enumerate_traces(u, {}, 8);
    EXPECT_EQ(t.complete, (std::set<Trace>{word({"u.a!", "u.d!"}), word({"u.d!", "u.a!"})}));
}

TEST(Traces, SemaphoreOrdersBranches) {
    auto u = unit_with(par({seq({wait("s"), send("a")}), seq({send("d"), signal("s")})}), {"a", "d"}, {"s"});
    auto t = enumerate_traces(u, {}, 8);
    // Reference: shuffle of (w a) and (b s) with counter s >= 0 along the way.
    std::set<Trace> want;
    std::vector<std::string> x{"w", "a"}, y{"d", "s"};
    std::function<void(std::size_t, std::size_t, int, Trace)> go = [&](std::size_t i, std::size_t j, int s, Trace w) {
        if (i == x.size() && j == y.size()) {
            want.insert(w);
            return;
        }
        auto visit = [&](const std::string& sym, std::size_t ni, std::size_t nj) {
            int ns = s + (sym == "s") - (sym == "w");
            if (ns < 0) return;
            Trace nw = w;
            if (sym != "s" && sym != "w") nw.push_back("u." + sym + "!");
            go(ni, nj, ns, nw);
        };
        if (i < x.size()) visit(x[i], i + 1, j);
        if (j < y.size()) visit(y[j], i, j + 1);
    };
    go(0, 0, 0, {});
    EXPECT_EQ(t.complete, want);
    EXPECT_EQ(want, (std::set<Trace>{word({"u.d!", "u.a!"})}));
}

TEST(Traces, CompleteTracesAreAmongPrefixes) {
    auto u = unit_with(repeat_counter(alt({send("a"), seq({receive("b"), send("a")})}), 2), {"a", "b"});
    auto t = enumerate_traces(u, {}, 8);
    for (const auto& w : t.complete) EXPECT_TRUE(t.prefixes.count(w));
    for (const auto& w : t.prefixes) {
        if (w.empty()) continue;
        Trace shorter(w.begin(), w.end() - 1);
        EXPECT_TRUE(t.prefixes.count(shorter));
    }
}

TEST(Traces, ScriptsDriveRepeatUntil) {
    auto u = unit_with(repeat_until(receive("s"), var("s")), {}, {}, {{"s", 1}});
    auto t = enumerate_traces(u, {{"s", {D, D, E(0)}}}, 8);
    EXPECT_EQ(t.complete, (std::set<Trace>{word({"u.s?", "u.s?", "u.s?"})}));
}

TEST(Traces, ScriptExhaustion) {
    auto u = unit_with(repeat_until(receive("s"), var("s")), {}, {}, {{"s", 1}});
    EXPECT_THROW((void)enumerate_traces(u, {{"s", {D, D}}}, 8), ScriptExhausted);
}

TEST(Traces, ForeverHasNoCompleteTrace) {
    auto u = unit_with(repeat_forever(send("a")), {"a"});
    auto t = enumerate_traces(u, {}, 4);
    EXPECT_TRUE(t.complete.empty());
    EXPECT_EQ(t.prefixes.size(), 5u);
}

TEST(Traces, RepetitiveUnitMayRunAgain) {
    auto u = unit_with(send("a"), {"a"});
    u.kind = ahcl::UnitKind::repetitive;
    auto t = enumerate_traces(u, {}, 3);
    EXPECT_EQ(t.complete,
              (std::set<Trace>{word({"u.a!"}), word({"u.a!", "u.a!"}), word({"u.a!", "u.a!", "u.a!"})}));
}

TEST(Traces, ParseScripts) {
    auto s = parse_scripts(R"({"p": ["DATA", "EOS2", "EOS0"]})");
    EXPECT_EQ(s.at("p"), (std::vector<StreamKind>{D, E(2), E(0)}));
    EXPECT_THROW((void)parse_scripts("[1]"), std::invalid_argument);
    EXPECT_THROW((void)parse_scripts(R"({"p": ["DAT"]})"), std::invalid_argument);
    EXPECT_THROW((void)parse_scripts("{"), std::invalid_argument);
}

// ---- regular fragment against direct expansion ----

namespace {

using Lang = std::set<Trace>;

Lang concat(const Lang& a, const Lang& b, std::size_t max) {
    Lang out;
    for (const auto& x : a) {
        for (const auto& y : b) {
            if (x.size() + y.size() > max) continue;
            Trace w = x;
            w.insert(w.end(), y.begin(), y.end());
            out.insert(w);
        }
    }
    return out;
}

void shuffle_into(const Trace& x, const Trace& y, std::size_t i, std::size_t j, Trace& cur, Lang& out) {
    if (i == x.size() && j == y.size()) {
        out.insert(cur);
        return;
    }
    if (i < x.size()) {
        cur.push_back(x[i]);
        shuffle_into(x, y, i + 1, j, cur, out);
        cur.pop_back();
    }
    if (j < y.size()) {
        cur.push_back(y[j]);
        shuffle_into(x, y, i, j + 1, cur, out);
        cur.pop_back();
    }
}

Lang shuffle(const Lang& a, const Lang& b, std::size_t max) {
    Lang out;
    for (const auto& x : a) {
        for (const auto& y : b) {
            if (x.size() + y.size() > max) continue;
            Trace cur;
            shuffle_into(x, y, 0, 0, cur, out);
        }
    }
    return out;
}

Lang expand(const Action& a, std::size_t max) {
    switch (a.kind) {
    case ActionKind::skip: return {Trace{}};
    case ActionKind::activate: return {Trace{"u." + a.id + (a.id == "a" ? "!" : "?")}};
    case ActionKind::seq: {
        Lang l{Trace{}};
        for (const auto& c : a.children) l = concat(l, expand(c, max), max);
        return l;
    }
    case ActionKind::par: {
        Lang l{Trace{}};
        for (const auto& c : a.children) l = shuffle(l, expand(c, max), max);
        return l;
    }
    case ActionKind::alt: {
        Lang l;
        for (const auto& c : a.children) {
            auto x = expand(c, max);
            l.insert(x.begin(), x.end());
        }
        return l;
    }
    case ActionKind::repeat_counter: {
        Lang body = expand(a.children[0], max);
        Lang l{Trace{}};
        for (int i = 0; i < a.count; ++i) l = concat(l, body, max);
        return l;
    }
    default: ADD_FAILURE() << "unexpected action"; return {};
    }
}

Action random_action(std::mt19937& rng, int depth, bool with_sems) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    static const char* ports[] = {"a", "b", "c"};
    int choice = depth <= 0 ? pick(0, 1) : pick(0, with_sems ? 7 : 5);
    auto kids = [&] {
        std::vector<Action> out;
        int n = pick(1, 3);
        for (int i = 0; i < n; ++i) out.push_back(random_action(rng, depth - 1, with_sems));
        return out;
    };
    switch (choice) {
    case 0: return skip();
    case 1: {
        int k = pick(0, 2);
        return k == 0 ? send(ports[k]) : receive(ports[k]);
    }
    case 2: return seq(kids());
    case 3: return par(kids());
    case 4: return alt(kids());
    case 5: return repeat_counter(random_action(rng, depth - 1, with_sems), pick(1, 3));
    case 6: return signal(pick(0, 1) ? "s" : "t");
    default: return wait(pick(0, 1) ? "s" : "t");
    }
}

Action without_sems(const Action& a) {
    if (a.kind == ActionKind::signal || a.kind == ActionKind::wait) return skip();
    Action b = a;
    for (auto& c : b.children) c = without_sems(c);
    return b;
}

ahcl::Unit random_unit(const Action& a) {
    auto u = unit_with(a, {"a", "b", "c"}, {"s", "t"});
    return u;
}

}  // namespace

TEST(TracesProperty, RegularFragmentEqualsDirectExpansion) {
    std::mt19937 rng(1234);
    for (int i = 0; i < 150; ++i) {
        Action a = random_action(rng, 3, false);
        auto t = enumerate_traces(random_unit(a), {}, 6);
        EXPECT_EQ(t.complete, expand(a, 6)) << "case " << i;
    }
}

TEST(TracesProperty, SemaphoresOnlyRemoveTraces) {
    std::mt19937 rng(99);
    for (int i = 0; i < 150; ++i) {
        Action a = random_action(rng, 3, true);
        auto constrained = enumerate_traces(random_unit(a), {}, 6);
        auto free = enumerate_traces(random_unit(without_sems(a)), {}, 6);
        for (const auto& w : constrained.complete) EXPECT_TRUE(free.complete.count(w)) << "case " << i;
        for (const auto& w : constrained.prefixes) EXPECT_TRUE(free.prefixes.count(w)) << "case " << i;
    }
}
