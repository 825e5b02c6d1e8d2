#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "fixtures.hpp"
#include "random_net.hpp"
#include "hashnets/ahcl/parser.hpp"
#include "hashnets/analyze/deadlock.hpp"
#include "hashnets/interop/cli.hpp"
#include "hashnets/interop/pnml.hpp"
#include "hashnets/interop/report.hpp"
#include "hashnets/petri/reach.hpp"
#include "hashnets/translate/translate.hpp"

using namespace hashnets;
using namespace hashnets::interop;
using petri::InterlacedNet;
using hashnets::testing::fixture_dir;
using hashnets::testing::fixtures;
using hashnets::testing::load;

namespace {

// Id-keyed view of a net; import keeps ids, so equal views mean an id-preserving isomorphism.
struct View {
    std::map<std::string, unsigned> places;
    std::map<std::string, std::optional<std::string>> transitions;
    std::set<std::tuple<std::string, std::string, unsigned>> arcs;
    std::optional<std::set<std::tuple<std::string, int, unsigned>>> final;
    bool operator==(const View&) const = default;
};

View view(const InterlacedNet& n) {
    View v;
    for (std::size_t i = 0; i < n.places().size(); ++i) v.places[n.places()[i].id] = n.initial(i);
    for (const auto& t : n.transitions()) v.transitions[t.id] = t.label;
    for (const auto& a : n.arcs()) {
        const auto& p = n.places()[a.place].id;
        const auto& t = n.transitions()[a.transition].id;
        v.arcs.emplace(a.from_place ? p : t, a.from_place ? t : p, a.weight);
    }
    if (const auto& f = n.final_predicate()) {
        v.final.emplace();
        for (const auto& atom : *f) v.final->emplace(atom.place, static_cast<int>(atom.op), atom.count);
    }
    return v;
}

std::vector<std::pair<std::string, InterlacedNet>> fixture_nets() {
    std::vector<std::pair<std::string, InterlacedNet>> out;
    for (const auto& rel : fixtures("")) {
        auto c = load(rel);
        out.emplace_back(rel, translate::translate_component(c));
        translate::TranslationOptions opt;
        opt.with_stream_protocol = true;
        opt.with_order_consistency = true;
        out.emplace_back(rel + " +streams", translate::translate_component(c, opt));
    }
    return out;
}

struct Run {
    int code = 0;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hashnets");
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string fx(const std::string& rel) { return (fixture_dir() / rel).string(); }

const char* kForeign = R"(<?xml version="1.0"?>
<pnml xmlns="http://www.pnml.org/version-2009/grammar/pnml">
  <net id="n1" type="http://www.pnml.org/version-2009/grammar/ptnet">
    <page id="pg">
      <place id="a"><initialMarking><text>2</text></initialMarking></place>
      <place id="b"/>
      <transition id="go"><name><text>x</text></name></transition>
      <transition id="tau"/>
      <arc id="e1" source="a" target="go"><inscription><text>2</text></inscription></arc>
      <arc id="e2" source="go" target="b"/>
      <arc id="e3" source="b" target="tau"/>
    </page>
  </net>
</pnml>)";

}  // namespace

TEST(Pnml, SkipUnitNet) {
    auto slices = translate::translate_slices(load("protocols/skip.ahcl"));
    const InterlacedNet* unit = nullptr;
    for (const auto& [name, net] : slices.slices) {
        if (name == "unit:u") unit = &net;
    }
    ASSERT_NE(unit, nullptr);
    // The program slice puts the start token; everything else in it is program scaffolding.
    InterlacedNet start;
    start.add_place("process_started[u]", {}, 1);
    auto xml = export_pnml(petri::unfold(petri::unite(*unit, start)));
    auto count = [&](const std::string& tag) {
        std::size_t n = 0;
        for (auto at = xml.find(tag); at != std::string::npos; at = xml.find(tag, at + 1)) ++n;
        return n;
    };
    EXPECT_EQ(count("<place "), 1u);
    EXPECT_EQ(count("<transition "), 0u);
    EXPECT_NE(xml.find("<initialMarking><text>1</text></initialMarking>"), std::string::npos);
    EXPECT_NE(xml.find(ptnet_type), std::string::npos);
    auto back = import_pnml(xml);
    EXPECT_EQ(back.places().size(), 1u);
    EXPECT_EQ(back.initial(0), 1u);
    EXPECT_TRUE(back.transitions().empty());
}

TEST(Pnml, RoundTripAllFixtures) {
    auto nets = fixture_nets();
    ASSERT_GE(nets.size(), 60u);
    for (const auto& [name, n] : nets) {
        SCOPED_TRACE(name);
        auto back = import_pnml(export_pnml(n, "x"));
        EXPECT_TRUE(isomorphic(n, back));
        EXPECT_EQ(view(n), view(back));
        EXPECT_EQ(export_pnml(back, "x"), export_pnml(n, "x"));
    }
}

TEST(Pnml, DiningB5Counts) {
    auto n = translate::translate_component(load("dining/dining_b5.ahcl"));
    auto back = import_pnml(export_pnml(n));
    EXPECT_EQ(back.places().size(), n.places().size());
    EXPECT_EQ(back.transitions().size(), n.transitions().size());
    EXPECT_EQ(back.arcs().size(), n.arcs().size());
}

TEST(Pnml, RandomNetsRoundTrip) {
    std::mt19937 rng(99);
    for (int i = 0; i < 100; ++i) {
        auto n = hashnets::testing::random_net(rng);
        EXPECT_EQ(view(import_pnml(export_pnml(n))), view(n));
    }
}

TEST(Pnml, IsomorphismRejectsChanges) {
    auto n = translate::translate_component(load("protocols/counter3.ahcl"));
    EXPECT_TRUE(isomorphic(n, n));

    auto marked = n;
    marked.set_initial(n.places()[0].id, n.initial(0) + 1);
    EXPECT_FALSE(isomorphic(n, marked));

    auto extra = n;
    extra.add_place("extra");
    EXPECT_FALSE(isomorphic(n, extra));

    auto heavier = n;
    const auto& a = n.arcs().front();
    const auto& p = n.places()[a.place].id;
    const auto& t = n.transitions()[a.transition].id;
    a.from_place ? heavier.add_arc(p, t, 1) : heavier.add_arc(t, p, 1);
    EXPECT_FALSE(isomorphic(n, heavier));

    auto relabelled = n;
    relabelled.add_transition("fresh", "zz");
    EXPECT_FALSE(isomorphic(n, relabelled));

    auto unfinal = n;
    unfinal.clear_final();
    EXPECT_FALSE(isomorphic(n, unfinal));
}

TEST(Pnml, ForeignDocument) {
    auto n = import_pnml(kForeign);
    ASSERT_EQ(n.places().size(), 2u);
    EXPECT_EQ(n.initial(*n.place_index("a")), 2u);
    EXPECT_EQ(n.transitions()[*n.transition_index("go")].label, "x");
    EXPECT_FALSE(n.transitions()[*n.transition_index("tau")].label);
    EXPECT_TRUE(n.places()[0].qualifiers.empty());
    auto go = *n.transition_index("go");
    ASSERT_EQ(n.pre(go).size(), 1u);
    EXPECT_EQ(n.pre(go)[0].second, 2u);
    EXPECT_FALSE(n.final_predicate());
}

TEST(Pnml, Errors) {
    EXPECT_THROW((void)import_pnml("<pnml><net"), ParseError);
    EXPECT_THROW((void)import_pnml("<other/>"), ParseError);
    EXPECT_THROW((void)import_pnml("<pnml/>"), ParseError);
    std::string coloured = kForeign;
    coloured.replace(coloured.find("ptnet"), 5, "symmetricnet");
    EXPECT_THROW((void)import_pnml(coloured), UnsupportedNetType);
    std::string dangling = kForeign;
    dangling.replace(dangling.find("target=\"b\""), 10, "target=\"q\"");
    EXPECT_THROW((void)import_pnml(dangling), ParseError);
    std::string zero = kForeign;
    zero.replace(zero.find("<text>2</text></inscription>"), 14, "<text>0</text>");
    EXPECT_THROW((void)import_pnml(zero), ParseError);
    std::string place_place = kForeign;
    place_place.replace(place_place.find("target=\"go\""), 11, "target=\"b\"");
    EXPECT_THROW((void)import_pnml(place_place), ParseError);
}

TEST(Report, DeadlocksJson) {
    auto n = translate::translate_component(load("channels/ready_misuse.ahcl"));
    auto g = petri::reachability_graph(n);
    auto r = analyze::find_deadlocks(n, g);
    auto j = nlohmann::json::parse(deadlocks_json(n, g, r));
    EXPECT_EQ(j["schema"], report_schema);
    ASSERT_EQ(j["dead"].size(), 1u);
    EXPECT_EQ(j["dead"][0]["witness"].size(), r.dead[0].path.size());
    EXPECT_EQ(j["graph"]["states"], g.stats.states);
    EXPECT_FALSE(j["truncated"].get<bool>());

    auto reach = nlohmann::json::parse(reach_json(n, g));
    EXPECT_EQ(reach["schema"], 1);
    EXPECT_EQ(reach["places"], n.places().size());
    EXPECT_EQ(reach["graph"]["edges"], g.stats.edges);
}

TEST(Report, Text) {
    InterlacedNet n;
    n.add_place("p", {}, 2);
    n.add_place("q");
    n.add_place("r", {}, 1);
    n.add_transition("t1", "a");
    n.add_transition("t2");
    EXPECT_EQ(marking_text(n, n.initial_marking()), "p=2, r=1");
    EXPECT_EQ(path_text(n, {1, 0}), "t2 t1");
}

TEST(Cli, ParsePrintsCanonicalForm) {
    auto r = cli({"parse", fx("protocols/counter3.ahcl")});
    EXPECT_EQ(r.code, 0) << r.err;
    auto again = ahcl::parse_configuration(r.out);
    EXPECT_EQ(ahcl::print_configuration(again), r.out);
}

TEST(Cli, Diagnostics) {
    auto tmp = std::filesystem::temp_directory_path() / "hashnets_bad.ahcl";
    {
        std::ofstream f(tmp);
        f << "component bad {\n  unit u { ports { out a; } protocol { b! } }\n}\n";
    }
    auto r = cli({"parse", tmp.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("hashnets_bad.ahcl:2:"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("unknown port 'b'"), std::string::npos) << r.err;

    EXPECT_EQ(cli({"parse", "/nonexistent.ahcl"}).code, 1);
    EXPECT_EQ(cli({}).code, 1);
    EXPECT_EQ(cli({"frobnicate"}).code, 1);
    EXPECT_EQ(cli({"translate", fx("protocols/skip.ahcl"), "--streams", "--no-streams"}).code, 1);
    EXPECT_EQ(cli({"translate", fx("protocols/skip.ahcl"), "-o", "out.txt"}).code, 1);
    EXPECT_EQ(cli({"reach", fx("protocols/skip.ahcl"), "--max-states", "0"}).code, 1);
    EXPECT_EQ(cli({"lang", fx("dining/dining_b4.ahcl"), "--oracle", "--max-len", "1"}).code, 1);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, TranslateAndReimport) {
    auto dir = std::filesystem::temp_directory_path();
    auto pnml = (dir / "hashnets_b5.pnml").string();
    auto dot = (dir / "hashnets_b5.dot").string();
    auto r = cli({"translate", fx("dining/dining_b5.ahcl"), "-o", pnml});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(cli({"translate", fx("dining/dining_b5.ahcl"), "-o", dot}).code, 0);
    EXPECT_EQ(hashnets::testing::slurp(dot).rfind("digraph", 0), 0u);

    auto from_pnml = cli({"deadlocks", pnml});
    auto from_ahcl = cli({"deadlocks", fx("dining/dining_b5.ahcl")});
    EXPECT_EQ(from_pnml.code, 0) << from_pnml.err;
    EXPECT_EQ(from_pnml.out, from_ahcl.out);
    EXPECT_NE(from_ahcl.out.find("dead markings: 0"), std::string::npos) << from_ahcl.out;
}

TEST(Cli, CheckDining) {
    auto r = cli({"check", fx("dining/dining_b4.ahcl"), "--formulas", fx("dining/common.ctl"), "--formulas",
                  fx("dining/dining_b4.ctl")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("deadlock_bad: false"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("mutex_bad: false"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("two_eating: "), std::string::npos) << r.out;

    auto j = cli({"check", fx("channels/ready_misuse.ahcl"), "--formulas", fx("channels/ready_misuse.ctl"), "--json"});
    ASSERT_EQ(j.code, 0) << j.err;
    auto doc = nlohmann::json::parse(j.out);
    EXPECT_EQ(doc["schema"], 1);
    ASSERT_EQ(doc["formulas"].size(), 2u);
    EXPECT_EQ(doc["formulas"][0]["verdict"], "true");
    EXPECT_FALSE(doc["formulas"][0]["path"].empty());
}

TEST(Cli, LangOracle) {
    auto r = cli({"lang", fx("protocols/counter3.ahcl"), "--max-len", "5", "--oracle"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("EQUAL {u.a! u.a! u.a!}"), std::string::npos) << r.out;
    auto f = cli({"lang", fx("protocols/forever.ahcl"), "--max-len", "3"});
    EXPECT_NE(f.out.find(": 0 words"), std::string::npos) << f.out;
}

TEST(Cli, Deterministic) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"reach", fx("streams/abp_reduced.ahcl"), "--streams", "--json", "--threads", "2"},
             {"deadlocks", fx("channels/ready_misuse.ahcl"), "--json"},
             {"parse", fx("dining/dining_a.ahcl")}}) {
        auto a = cli(args), b = cli(args);
        EXPECT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
    auto n = translate::translate_component(load("dining/dining_a.ahcl"));
    EXPECT_EQ(export_pnml(n), export_pnml(translate::translate_component(load("dining/dining_a.ahcl"))));
}
