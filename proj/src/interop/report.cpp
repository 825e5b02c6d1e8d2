#include "hashnets/interop/report.hpp"

#include <json.hpp>

namespace hashnets::interop {

using nlohmann::json;

namespace {

json path_json(const petri::InterlacedNet& n, const std::vector<std::uint32_t>& path) {
    json out = json::array();
    for (auto t : path) {
        const auto& tr = n.transitions()[t];
        json step{{"transition", tr.id}};
        step["label"] = tr.label ? json(*tr.label) : json(nullptr);
        out.push_back(std::move(step));
    }
    return out;
}

json marking_json(const petri::InterlacedNet& n, const petri::Marking& m) {
    json out = json::object();
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (m[p]) out[n.places()[p].id] = m[p];
    }
    return out;
}

json stats_json(const petri::ReachGraph& g) {
    return {{"states", g.stats.states},         {"edges", g.stats.edges}, {"depth", g.stats.depth},
            {"peak_frontier", g.stats.peak_frontier}, {"bytes", g.stats.bytes}, {"truncated", g.truncated}};
}

}  // namespace

std::string path_text(const petri::InterlacedNet& n, const std::vector<std::uint32_t>& path) {
    std::string out;
    for (auto t : path) {
        if (!out.empty()) out += " ";
        out += n.transitions()[t].id;
    }
    return out.empty() ? "(initial marking)" : out;
}

std::string marking_text(const petri::InterlacedNet& n, const petri::Marking& m) {
    std::string out;
    for (std::size_t p = 0; p < m.size(); ++p) {
        if (!m[p]) continue;
        if (!out.empty()) out += ", ";
        out += n.places()[p].id + "=" + std::to_string(m[p]);
    }
    return out.empty() ? "(empty)" : out;
}

std::string reach_json(const petri::InterlacedNet& n, const petri::ReachGraph& g) {
    json j{{"schema", report_schema},
           {"places", n.places().size()},
           {"transitions", n.transitions().size()},
           {"graph", stats_json(g)}};
    return j.dump(2);
}

std::string deadlocks_json(const petri::InterlacedNet& n, const petri::ReachGraph& g,
                           const analyze::DeadlockReport& r) {
    json dead = json::array();
    for (const auto& d : r.dead) {
        dead.push_back({{"state", d.state}, {"marking", marking_json(n, g.marking(d.state))},
                        {"witness", path_json(n, d.path)}});
    }
    json j{{"schema", report_schema},
           {"graph", stats_json(g)},
           {"final_states", r.final_states},
           {"truncated", r.truncated},
           {"dead", std::move(dead)}};
    return j.dump(2);
}

std::string check_json(const petri::InterlacedNet& n, const petri::ReachGraph& g,
                       const std::vector<FormulaOutcome>& outcomes) {
    json fs = json::array();
    for (const auto& o : outcomes) {
        json f{{"formula", o.text}, {"line", o.line}};
        if (!o.error.empty()) {
            f["error"] = o.error;
        } else {
            f["expanded"] = o.expanded;
            f["verdict"] = analyze::to_string(o.result->verdict);
            f["satisfying_states"] = o.result->satisfying_states;
            if (!o.result->path.empty() || o.result->loop_start) {
                f["path"] = path_json(n, o.result->path);
                if (o.result->loop_start) f["loop_start"] = *o.result->loop_start;
            }
        }
        fs.push_back(std::move(f));
    }
    json j{{"schema", report_schema}, {"graph", stats_json(g)}, {"formulas", std::move(fs)}};
    return j.dump(2);
}

}  // namespace hashnets::interop
