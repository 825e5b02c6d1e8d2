#include "hashnets/interop/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hashnets/ahcl/parser.hpp"
#include "hashnets/analyze/deadlock.hpp"
#include "hashnets/analyze/formula.hpp"
#include "hashnets/behavior/traces.hpp"
#include "hashnets/interop/pnml.hpp"
#include "hashnets/interop/report.hpp"
#include "hashnets/petri/dot.hpp"
#include "hashnets/petri/language.hpp"
#include "hashnets/translate/translate.hpp"

namespace hashnets::interop {

namespace {

// Input problems reported as diagnostics (exit 1).
struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string file;
    std::size_t max_states = 1'000'000;
    std::size_t max_depth = 0;
    unsigned threads = 1;
    bool dfs = false;
    bool streams = false;
    bool no_streams = false;
    bool order = false;
    int buffer = 1;
    bool json = false;
    std::string output;
    std::string dot;
    std::vector<std::string> formulas;
    bool strict = false;
    std::size_t max_len = 8;
    bool oracle = false;
    bool prefix = false;
};

struct Model {
    std::optional<ahcl::Component> component;
    petri::InterlacedNet net;
    std::vector<translate::UnitFlow> flows;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UserError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::size_t env_max_states() {
    const char* v = std::getenv("HASHNETS_MAX_STATES");
    if (!v || !*v) return 1'000'000;
    std::string s(v);
    std::size_t used = 0;
    unsigned long long n = 0;
    try {
        n = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || n == 0) throw UserError("HASHNETS_MAX_STATES must be a positive integer, got '" + s + "'");
    return static_cast<std::size_t>(n);
}

// Parses and validates a configuration; prints diagnostics and returns nullopt on errors.
std::optional<ahcl::Component> load_component(const std::string& path, std::ostream& err) {
    std::string text = read_file(path);
    ahcl::Component c;
    try {
        c = ahcl::parse_configuration(text);
    } catch (const ahcl::SyntaxError& e) {
        err << ahcl::format(e.diagnostic(), path) << "\n";
        return std::nullopt;
    } catch (const ahcl::DuplicateIdentifier& e) {
        err << ahcl::format(e.diagnostic(), path) << "\n";
        return std::nullopt;
    }
    auto report = ahcl::validate_configuration(c);
    for (const auto& d : report.diagnostics) err << ahcl::format(d, path) << "\n";
    if (report.has_errors()) return std::nullopt;
    return c;
}

translate::TranslationOptions translation_options(const Options& o) {
    if (o.streams && o.no_streams) throw UserError("--streams and --no-streams exclude each other");
    if (o.buffer < 1) throw UserError("--buffer must be positive");
    translate::TranslationOptions t;
    t.with_stream_protocol = o.streams || o.order;
    if (o.no_streams && o.order) throw UserError("--order-consistency needs the stream protocol");
    t.with_order_consistency = o.order;
    t.buffer_default = o.buffer;
    return t;
}

std::optional<Model> load_model(const Options& o, std::ostream& err) {
    Model m;
    if (ends_with(o.file, ".pnml")) {
        m.net = import_pnml(read_file(o.file));
        return m;
    }
    auto c = load_component(o.file, err);
    if (!c) return std::nullopt;
    auto t = translate::translate(*c, translation_options(o));
    m.component = std::move(c);
    m.net = std::move(t.net);
    m.flows = std::move(t.flows);
    return m;
}

petri::ReachLimits limits(const Options& o) {
    petri::ReachLimits l;
    l.max_states = o.max_states;
    if (o.max_depth) l.max_depth = o.max_depth;
    l.threads = o.threads;
    l.order = o.dfs ? petri::SearchOrder::depth_first : petri::SearchOrder::breadth_first;
    return l;
}

void print_graph_summary(std::ostream& out, const petri::InterlacedNet& n, const petri::ReachGraph& g) {
    out << "net: " << n.places().size() << " places, " << n.transitions().size() << " transitions, "
        << n.arcs().size() << " arcs\n";
    out << "reachability: " << g.stats.states << " states, " << g.stats.edges << " edges, depth "
        << g.stats.depth << (g.truncated ? " (truncated)" : "") << "\n";
}

std::string word_text(const petri::Word& w) {
    if (w.empty()) return "ε";
    std::string s;
    for (const auto& x : w) s += (s.empty() ? "" : " ") + x;
    return s;
}

void print_words(std::ostream& out, const std::set<petri::Word>& words, const std::string& indent) {
    for (const auto& w : words) out << indent << word_text(w) << "\n";
}

int cmd_parse(const Options& o, std::ostream& out, std::ostream& err) {
    auto c = load_component(o.file, err);
    if (!c) return exit_diagnostics;
    out << ahcl::print_configuration(*c);
    return exit_ok;
}

int cmd_translate(const Options& o, std::ostream& out, std::ostream& err) {
    auto m = load_model(o, err);
    if (!m) return exit_diagnostics;
    if (o.output.empty()) {
        out << "net: " << m->net.places().size() << " places, " << m->net.transitions().size() << " transitions, "
            << m->net.arcs().size() << " arcs\n";
        return exit_ok;
    }
    std::string text;
    if (ends_with(o.output, ".pnml")) {
        text = export_pnml(m->net, m->component ? m->component->name : "net");
    } else if (ends_with(o.output, ".dot")) {
        text = petri::net_to_dot(m->net);
    } else {
        throw UserError("output must end in .pnml or .dot: '" + o.output + "'");
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!(f << text)) throw UserError("cannot write '" + o.output + "'");
    out << "wrote " << o.output << "\n";
    return exit_ok;
}

int cmd_reach(const Options& o, std::ostream& out, std::ostream& err) {
    auto m = load_model(o, err);
    if (!m) return exit_diagnostics;
    auto g = petri::reachability_graph(m->net, limits(o));
    if (!o.dot.empty()) {
        std::ofstream f(o.dot, std::ios::binary);
        if (!(f << petri::reach_to_dot(m->net, g))) throw UserError("cannot write '" + o.dot + "'");
    }
    if (o.json) {
        out << reach_json(m->net, g) << "\n";
    } else {
        print_graph_summary(out, m->net, g);
        out << "peak frontier: " << g.stats.peak_frontier << ", memory: " << g.stats.bytes << " bytes\n";
    }
    return exit_ok;
}

int cmd_deadlocks(const Options& o, std::ostream& out, std::ostream& err) {
    auto m = load_model(o, err);
    if (!m) return exit_diagnostics;
    auto g = petri::reachability_graph(m->net, limits(o));
    auto r = analyze::find_deadlocks(m->net, g);
    if (o.json) {
        out << deadlocks_json(m->net, g, r) << "\n";
        return exit_ok;
    }
    print_graph_summary(out, m->net, g);
    out << "dead markings: " << r.dead.size() << (r.truncated ? " (among explored states only)" : "") << "\n";
    for (std::size_t i = 0; i < r.dead.size(); ++i) {
        const auto& d = r.dead[i];
        out << "dead #" << i + 1 << ": " << marking_text(m->net, g.marking(d.state)) << "\n";
        out << "  witness: " << path_text(m->net, d.path) << "\n";
    }
    return exit_ok;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
    analyze::FormulaFile lib;
    for (const auto& f : o.formulas) {
        try {
            analyze::merge(lib, analyze::parse_formula_file(read_file(f)));
        } catch (const analyze::CtlSyntaxError& e) {
            err << f << ": " << e.what() << "\n";
            return exit_diagnostics;
        }
    }
    auto m = load_model(o, err);
    if (!m) return exit_diagnostics;
    auto g = petri::reachability_graph(m->net, limits(o));
    analyze::ModelContext ctx{m->net, m->component ? &*m->component : nullptr, m->component ? &m->flows : nullptr};
    std::vector<FormulaOutcome> outcomes;
    bool failed = false;
    for (const auto& line : lib.formulas) {
        FormulaOutcome fo;
        fo.text = line.text;
        fo.line = line.line;
        try {
            auto f = analyze::expand_macros(line.text, lib, ctx);
            fo.expanded = analyze::to_string(*f);
            fo.result = analyze::check_ctl(m->net, g, *f, o.strict);
        } catch (const analyze::TruncatedGraph& e) {
            fo.error = e.what();
            failed = true;
        } catch (const std::runtime_error& e) {
            fo.error = e.what();
            failed = true;
        } catch (const std::invalid_argument& e) {
            fo.error = e.what();
            failed = true;
        }
        outcomes.push_back(std::move(fo));
    }
    if (o.json) {
        out << check_json(m->net, g, outcomes) << "\n";
    } else {
        print_graph_summary(out, m->net, g);
        if (outcomes.empty()) out << "no formulas to check\n";
        for (const auto& fo : outcomes) {
            if (!fo.error.empty()) {
                err << "line " << fo.line << ": " << fo.text << ": error: " << fo.error << "\n";
                continue;
            }
            out << "line " << fo.line << ": " << fo.text << ": " << analyze::to_string(fo.result->verdict) << "\n";
            if (!fo.result->path.empty() || fo.result->loop_start) {
                out << "  path: " << path_text(m->net, fo.result->path);
                if (fo.result->loop_start) out << " (loops back after step " << *fo.result->loop_start << ")";
                out << "\n";
            }
        }
    }
    return failed ? exit_diagnostics : exit_ok;
}

int cmd_lang(const Options& o, std::ostream& out, std::ostream& err) {
    auto m = load_model(o, err);
    if (!m) return exit_diagnostics;
    auto g = petri::reachability_graph(m->net, limits(o));
    auto lang = o.prefix ? petri::net_language(m->net, g, o.max_len) : petri::terminal_language(m->net, g, o.max_len);
    out << (o.prefix ? "net" : "terminal") << " language (max length " << o.max_len << "): " << lang.words.size()
        << " words" << (lang.truncated ? " (truncated)" : "") << "\n";
    print_words(out, lang.words, "  ");
    if (!o.oracle) return exit_ok;
    if (!m->component || m->component->units.size() != 1 || !m->component->channels.empty()) {
        throw UserError("--oracle needs a configuration with exactly one unit and no channels");
    }
    auto topt = translation_options(o);
    behavior::TraceOptions opt;
    opt.source = topt.with_stream_protocol ? behavior::KindSource::free : behavior::KindSource::nondeterministic;
    opt.order_consistency = topt.with_order_consistency;
    auto traces = behavior::enumerate_traces(m->component->units[0], {}, static_cast<int>(o.max_len), opt);
    const auto& expected = o.prefix ? traces.prefixes : traces.complete;
    std::set<petri::Word> oracle(expected.begin(), expected.end());
    if (oracle == lang.words) {
        out << "EQUAL {";
        bool first = true;
        for (const auto& w : oracle) {
            out << (first ? "" : ", ") << word_text(w);
            first = false;
        }
        out << "}\n";
        return exit_ok;
    }
    out << "DIFF\n";
    std::set<petri::Word> only_net, only_oracle;
    std::set_difference(lang.words.begin(), lang.words.end(), oracle.begin(), oracle.end(),
                        std::inserter(only_net, only_net.end()));
    std::set_difference(oracle.begin(), oracle.end(), lang.words.begin(), lang.words.end(),
                        std::inserter(only_oracle, only_oracle.end()));
    out << "only in net:\n";
    print_words(out, only_net, "  ");
    out << "only in oracle:\n";
    print_words(out, only_oracle, "  ");
    return exit_diagnostics;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Translate Hash configurations to Petri nets and analyse them", "hashnets"};
    app.require_subcommand(1);
    Options o;
    try {
        o.max_states = env_max_states();
    } catch (const UserError& e) {
        err << "error: " << e.what() << "\n";
        return exit_diagnostics;
    }

    auto file = [&](CLI::App* sub, const char* what) {
        sub->add_option("file", o.file, what)->required();
    };
    auto translation = [&](CLI::App* sub) {
        sub->add_flag("--streams", o.streams, "Include the stream synchronisation protocol");
        sub->add_flag("--no-streams", o.no_streams, "Leave the stream protocol out (default)");
        sub->add_flag("--order-consistency", o.order, "Check the order of transmitted kinds (implies --streams)");
        sub->add_option("--buffer", o.buffer, "Capacity of buffered channels without an explicit size");
    };
    auto exploration = [&](CLI::App* sub) {
        sub->add_option("--max-states", o.max_states, "State cap (default: HASHNETS_MAX_STATES or 1000000)");
        sub->add_option("--max-depth", o.max_depth, "Depth cap");
        sub->add_option("--threads", o.threads, "Worker threads for breadth-first search (0: all cores)");
        sub->add_flag("--dfs", o.dfs, "Explore depth-first; witnesses are then not necessarily shortest");
    };

    auto* parse = app.add_subcommand("parse", "Parse and validate a configuration, print its canonical form");
    file(parse, "Configuration (.ahcl)");

    auto* tr = app.add_subcommand("translate", "Translate a configuration into a Petri net");
    file(tr, "Configuration (.ahcl)");
    translation(tr);
    tr->add_option("-o,--output", o.output, "Output file (.pnml or .dot)");

    auto* reach = app.add_subcommand("reach", "Build the reachability graph");
    file(reach, "Configuration (.ahcl) or net (.pnml)");
    translation(reach);
    exploration(reach);
    reach->add_flag("--json", o.json, "JSON report");
    reach->add_option("--dot", o.dot, "Write the reachability graph as DOT");

    auto* dead = app.add_subcommand("deadlocks", "List dead markings with shortest witnesses");
    file(dead, "Configuration (.ahcl) or net (.pnml)");
    translation(dead);
    exploration(dead);
    dead->add_flag("--json", o.json, "JSON report");

    auto* check = app.add_subcommand("check", "Model-check CTL formulas");
    file(check, "Configuration (.ahcl) or net (.pnml)");
    translation(check);
    exploration(check);
    check->add_option("--formulas", o.formulas, "Formula files; later files override earlier macros")->required();
    check->add_flag("--strict", o.strict, "Fail instead of answering unknown on a truncated graph");
    check->add_flag("--json", o.json, "JSON report");

    auto* lang = app.add_subcommand("lang", "Enumerate the bounded terminal language");
    file(lang, "Configuration (.ahcl) or net (.pnml)");
    translation(lang);
    exploration(lang);
    lang->add_option("--max-len", o.max_len, "Maximal word length");
    lang->add_flag("--oracle", o.oracle, "Compare with the trace oracle (single-unit configurations)");
    lang->add_flag("--prefix", o.prefix, "Prefix-closed net language instead of the terminal language");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("hashnets");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_diagnostics;
    }

    try {
        if (o.max_states == 0) throw UserError("--max-states must be positive");
        if (*parse) return cmd_parse(o, out, err);
        if (*tr) return cmd_translate(o, out, err);
        if (*reach) return cmd_reach(o, out, err);
        if (*dead) return cmd_deadlocks(o, out, err);
        if (*check) return cmd_check(o, out, err);
        if (*lang) return cmd_lang(o, out, err);
    } catch (const UserError& e) {
        err << "error: " << e.what() << "\n";
        return exit_diagnostics;
    } catch (const ParseError& e) {
        err << o.file << ": error: " << e.what() << "\n";
        return exit_diagnostics;
    } catch (const UnsupportedNetType& e) {
        err << o.file << ": error: " << e.what() << "\n";
        return exit_diagnostics;
    } catch (const translate::UnboundPort& e) {
        err << o.file << ": error: " << e.what() << "\n";
        return exit_diagnostics;
    } catch (const translate::UnboundSemaphore& e) {
        err << o.file << ": error: " << e.what() << "\n";
        return exit_diagnostics;
    } catch (const translate::ArityMismatch& e) {
        err << o.file << ": error: " << e.what() << "\n";
        return exit_diagnostics;
    } catch (const petri::NoFinalMarking& e) {
        err << o.file << ": error: " << e.what() << "\n";
        return exit_diagnostics;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_internal;
}

}  // namespace hashnets::interop
