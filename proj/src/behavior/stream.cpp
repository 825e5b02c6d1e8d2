#include "hashnets/behavior/stream.hpp"

#include <algorithm>
#include <cctype>

namespace hashnets::behavior {

std::string to_string(StreamKind k) {
    return k.data ? "DATA" : "EOS" + std::to_string(k.level);
}

std::optional<StreamKind> parse_kind(const std::string& text) {
    std::string t;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    if (t == "DATA") return StreamKind::value();
    if (t.size() > 3 && t.compare(0, 3, "EOS") == 0) {
        int level = 0;
        for (std::size_t i = 3; i < t.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return std::nullopt;
            level = level * 10 + (t[i] - '0');
            if (level > 1000000) return std::nullopt;
        }
        return StreamKind::eos(level);
    }
    return std::nullopt;
}

const char* to_string(TriBool v) {
    switch (v) {
    case TriBool::true_: return "true";
    case TriBool::false_: return "false";
    case TriBool::fail: return "fail";
    }
    return "?";
}

namespace {

struct TreeParser {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    [[noreturn]] void fail(const char* what) const {
        throw std::invalid_argument(std::string(what) + " at offset " + std::to_string(i));
    }

    ValueTree node() {
        skip_ws();
        if (i >= s.size()) fail("unexpected end of list");
        if (s[i] == '[') {
            ++i;
            ValueTree t;
            skip_ws();
            if (i < s.size() && s[i] == ']') {
                ++i;
                return t;
            }
            for (;;) {
                t.children.push_back(node());
                skip_ws();
                if (i < s.size() && s[i] == ',') {
                    ++i;
                    continue;
                }
                if (i < s.size() && s[i] == ']') {
                    ++i;
                    return t;
                }
                fail("expected ',' or ']'");
            }
        }
        std::size_t start = i;
        while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != '[' &&
               !std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        if (i == start) fail("expected a value");
        ValueTree leaf;
        leaf.leaf = true;
        return leaf;
    }
};

void flatten(const ValueTree& t, int depth, int n, std::vector<StreamKind>& out) {
    if (t.leaf) {
        if (depth != n) {
            throw DepthExceeded("leaf at depth " + std::to_string(depth) +
                                " for nesting factor " + std::to_string(n));
        }
        out.push_back(StreamKind::value());
        return;
    }
    if (depth >= n) {
        throw DepthExceeded("list at depth " + std::to_string(depth) + " for nesting factor " +
                            std::to_string(n));
    }
    for (const auto& c : t.children) flatten(c, depth + 1, n, out);
    out.push_back(StreamKind::eos(depth));
}

}  // namespace

ValueTree parse_value_tree(const std::string& text) {
    TreeParser p{text};
    ValueTree t = p.node();
    p.skip_ws();
    if (p.i != text.size()) p.fail("trailing input");
    return t;
}

std::vector<StreamKind> stream_flatten(const ValueTree& tree, int n) {
    std::vector<StreamKind> out;
    flatten(tree, 0, n, out);
    return out;
}

std::set<StreamKind> valid_successors(StreamKind k, int n) {
    std::set<StreamKind> out;
    if (k.data) {
        out.insert(StreamKind::value());
        out.insert(StreamKind::eos(n - 1));
        return out;
    }
    if (k.level == 0) return out;
    out.insert(StreamKind::value());
    for (int j = k.level - 1; j <= n - 1; ++j) out.insert(StreamKind::eos(j));
    return out;
}

std::set<StreamKind> valid_initial(int n) {
    std::set<StreamKind> out{StreamKind::value()};
    for (int j = 0; j < n; ++j) out.insert(StreamKind::eos(j));
    return out;
}

TriBool evaluate_stream_predicate(const StreamPredicate& p, const LastKinds& last, int depth,
                                  NeverActivated policy) {
    auto value_of = [&](const std::string& port, bool& never) {
        auto it = last.find(port);
        if (it == last.end()) throw UnknownPort("unknown port '" + port + "' in stream predicate");
        if (!it->second) {
            never = true;
            return false;
        }
        return !it->second->data && it->second->level <= depth;
    };

    bool any_true = false;
    bool mixed = false;
    bool never_seen = false;
    for (const auto& c : p.disjuncts) {
        bool all = true;
        bool some = false;
        for (const auto& port : c.ports) {
            bool v = value_of(port, never_seen);
            all = all && v;
            some = some || v;
        }
        any_true = any_true || all;
        if (c.bracketed && some && !all) mixed = true;
    }
    if (never_seen && policy == NeverActivated::as_fail) return TriBool::fail;
    if (any_true) return TriBool::true_;
    if (mixed) return TriBool::fail;
    return TriBool::false_;
}

}  // namespace hashnets::behavior
