#include "hashnets/analyze/regions.hpp"

#include <map>

namespace hashnets::analyze {

namespace {

using behavior::ActionKind;
using translate::ActionNode;

class RegionWalker {
public:
    RegionWalker(const ahcl::Unit& u, std::string get, std::string put)
        : u_(u), get_(std::move(get)), put_(std::move(put)) {}

    // Activations of a group count for each of its members.
    bool matches(const ActionNode& n, const std::string& target) const {
        if (n.kind != ActionKind::activate) return false;
        if (n.id == target) return true;
        if (const ahcl::Group* g = u_.find_group(n.id)) {
            for (const auto& m : g->members) {
                if (m.id == target) return true;
            }
        }
        return false;
    }

    bool related(const ActionNode& n) const { return matches(n, get_) || matches(n, put_); }

    bool contains(const ActionNode& n) const {
        if (related(n)) return true;
        for (const auto& c : n.children) {
            if (contains(c)) return true;
        }
        return false;
    }

    const ActionNode* first_related(const ActionNode& n) const {
        if (related(n)) return &n;
        for (const auto& c : n.children) {
            if (auto* r = first_related(c)) return r;
        }
        return nullptr;
    }

    void mark(const std::string& place, bool v) {
        auto& h = held_[place];
        h = h || v;
    }

    bool walk(const ActionNode& n, bool in) {
        mark(n.start, in);
        bool out = in;
        switch (n.kind) {
        case ActionKind::activate:
            if (matches(n, put_)) {
                out = false;
                for (const auto& p : n.inner) mark(p, false);
            } else {
                out = matches(n, get_) ? true : in;
                for (const auto& p : n.inner) mark(p, in);
            }
            break;
        case ActionKind::do_collective:
            for (const auto& p : n.inner) mark(p, in);
            break;
        case ActionKind::seq:
            for (const auto& c : n.children) out = walk(c, out);
            break;
        case ActionKind::par: {
            bool carriers = false;
            bool any = false;
            for (const auto& c : n.children) {
                if (!contains(c)) continue;
                carriers = true;
                any = walk(c, in) || any;
            }
            if (!carriers) {
                for (const auto& c : n.children) walk(c, in);
            } else {
                out = any;
            }
            break;
        }
        case ActionKind::alt:
        case ActionKind::if_then_else:
            out = false;
            for (const auto& c : n.children) out = walk(c, in) || out;
            break;
        case ActionKind::repeat_until:
        case ActionKind::repeat_counter:
        case ActionKind::repeat_forever: {
            bool x = in;
            bool o = false;
            for (int i = 0; i < 4; ++i) {
                o = walk(n.children[0], x);
                bool next = in || o;
                if (next == x && i > 0) break;
                x = next;
            }
            out = n.kind == ActionKind::repeat_forever ? false : o;
            break;
        }
        default: break;
        }
        if (n.kind != ActionKind::repeat_forever) mark(n.stop, out);
        return out;
    }

    std::vector<std::string> region(const translate::UnitFlow& flow) {
        const ActionNode* first = first_related(flow.root);
        bool initially = first && matches(*first, put_) && !matches(*first, get_);
        walk(flow.root, initially);
        std::vector<std::string> out;
        for (const auto& [place, h] : held_) {
            if (h) out.push_back(place);
        }
        auto completes = [&](const std::string& id) {
            if (const ahcl::Group* g = u_.find_group(id)) {
                for (const auto& m : g->members) out.push_back(node_of(m.id));
            } else {
                out.push_back(node_of(id));
            }
        };
        completes(get_);
        return out;
    }

private:
    const ahcl::Unit& u_;
    std::string get_;
    std::string put_;
    std::map<std::string, bool> held_;

    std::string node_of(const std::string& port) const {
        return "port_complete[" + translate::port_name(u_.id, port) + "]";
    }
};

}  // namespace

std::vector<std::string> possession_region(const ahcl::Unit& unit, const translate::UnitFlow& flow,
                                           const std::string& get, const std::string& put) {
    return RegionWalker(unit, get, put).region(flow);
}

}  // namespace hashnets::analyze
