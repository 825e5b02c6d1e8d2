#include "hashnets/ahcl/parser.hpp"

#include <set>

#include "lexer.hpp"

namespace hashnets::ahcl {

using behavior::Action;
using behavior::ActionKind;
using behavior::StreamPredicate;
using detail::Tok;
using detail::Token;

namespace {

const std::set<std::string> keywords = {
    "component", "unit",   "repetitive", "ports",  "protocol", "in",     "out",
    "stream",    "group",  "any",        "all",    "sem",      "connect", "synchronous",
    "buffered",  "ready",  "collective", "skip",   "seq",      "par",    "alt",
    "repeat",    "until",  "counter",    "forever", "if",      "then",   "else",
    "signal",    "wait",   "do",         "mod"};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Component component() {
        Component c;
        c.span = peek().span;
        keyword("component");
        c.name = name();
        punct("{");
        std::set<std::string> unit_ids;
        std::set<std::string> channel_ids;
        std::set<std::string> collective_ids;
        while (!at_punct("}")) {
            if (at_keyword("unit")) {
                Unit u = unit();
                if (!unit_ids.insert(u.id).second) throw DuplicateIdentifier(u.span, "unit", u.id);
                c.units.push_back(std::move(u));
            } else if (at_keyword("connect")) {
                Channel ch = channel();
                if (!channel_ids.insert(ch.id).second) {
                    throw DuplicateIdentifier(ch.span, "channel", ch.id);
                }
                c.channels.push_back(std::move(ch));
            } else if (at_keyword("collective")) {
                CollectiveGroup g = collective();
                if (!collective_ids.insert(g.id).second) {
                    throw DuplicateIdentifier(g.span, "collective", g.id);
                }
                c.collectives.push_back(std::move(g));
            } else {
                fail({"unit", "connect", "collective", "}"});
            }
        }
        punct("}");
        if (peek().type != Tok::end) fail({"end of input"});
        c.span.length = toks_[pos_ - 1].span.offset + toks_[pos_ - 1].span.length - c.span.offset;
        return c;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return toks_[i < toks_.size() ? i : toks_.size() - 1];
    }

    [[noreturn]] void fail(std::set<std::string> expected) const {
        const Token& t = peek();
        throw SyntaxError(t.span, std::move(expected), t.type == Tok::end ? "end of input" : t.text);
    }

    bool at_punct(const char* p) const { return peek().type == Tok::punct && peek().text == p; }
    bool at_keyword(const char* k) const { return peek().type == Tok::ident && peek().text == k; }

    void punct(const char* p) {
        if (!at_punct(p)) fail({p});
        ++pos_;
    }

    void keyword(const char* k) {
        if (!at_keyword(k)) fail({k});
        ++pos_;
    }

    bool accept_punct(const char* p) {
        if (!at_punct(p)) return false;
        ++pos_;
        return true;
    }

    bool accept_keyword(const char* k) {
        if (!at_keyword(k)) return false;
        ++pos_;
        return true;
    }

    int integer() {
        if (peek().type != Tok::integer) fail({"integer"});
        return static_cast<int>(toks_[pos_++].value);
    }

    std::string simple_ident() {
        if (peek().type != Tok::ident || keywords.count(peek().text)) fail({"identifier"});
        return toks_[pos_++].text;
    }

    // identifier with optional index suffixes, e.g. phil[3] or rf_put[self]
    std::string name() {
        std::string n = simple_ident();
        while (at_punct("[")) {
            ++pos_;
            if (peek().type == Tok::integer) {
                n += "[" + toks_[pos_++].text + "]";
            } else if (peek().type == Tok::ident && !keywords.count(peek().text)) {
                n += "[" + toks_[pos_++].text + "]";
            } else {
                fail({"integer", "identifier"});
            }
            punct("]");
        }
        return n;
    }

    PortRef port_ref() {
        PortRef r;
        r.unit = name();
        punct(".");
        r.port = name();
        return r;
    }

    void close_span(Span& s) const {
        const Token& last = toks_[pos_ - 1];
        s.length = last.span.offset + last.span.length - s.offset;
    }

    int stream_suffix(bool& stream) {
        stream = false;
        if (!accept_keyword("stream")) return 0;
        stream = true;
        punct("(");
        int n = integer();
        punct(")");
        return n;
    }

    Port port_decl() {
        Port p;
        p.span = peek().span;
        if (accept_keyword("in")) {
            p.direction = Direction::input;
        } else if (accept_keyword("out")) {
            p.direction = Direction::output;
        } else if (accept_keyword("collective")) {
            p.collective = true;
            p.direction = Direction::input;
        } else {
            fail({"in", "out", "collective", "group"});
        }
        p.id = name();
        p.nesting = stream_suffix(p.stream);
        punct(";");
        close_span(p.span);
        return p;
    }

    Unit unit() {
        Unit u;
        u.span = peek().span;
        keyword("unit");
        u.id = name();
        if (accept_keyword("repetitive")) u.kind = UnitKind::repetitive;
        punct("{");
        std::set<std::string> ids;
        auto claim = [&](const std::string& id, Span s) {
            if (!ids.insert(id).second) throw DuplicateIdentifier(s, "port", id);
        };
        if (accept_keyword("ports")) {
            punct("{");
            while (!at_punct("}")) {
                if (at_keyword("group")) {
                    Group g;
                    g.span = peek().span;
                    ++pos_;
                    g.id = name();
                    claim(g.id, g.span);
                    if (accept_keyword("any")) {
                        g.kind = GroupKind::any;
                    } else if (accept_keyword("all")) {
                        g.kind = GroupKind::all;
                    } else {
                        fail({"any", "all"});
                    }
                    punct("{");
                    while (!at_punct("}")) {
                        Port m = port_decl();
                        claim(m.id, m.span);
                        g.members.push_back(std::move(m));
                    }
                    punct("}");
                    accept_punct(";");
                    close_span(g.span);
                    u.groups.push_back(std::move(g));
                } else {
                    Port p = port_decl();
                    claim(p.id, p.span);
                    u.ports.push_back(std::move(p));
                }
            }
            punct("}");
        }
        std::set<std::string> sems;
        while (at_keyword("sem")) {
            Span s = peek().span;
            ++pos_;
            do {
                std::string id = simple_ident();
                if (!sems.insert(id).second) throw DuplicateIdentifier(s, "semaphore", id);
                u.semaphores.push_back(id);
            } while (accept_punct(","));
            punct(";");
        }
        keyword("protocol");
        punct("{");
        Span body_span = peek().span;
        std::vector<Action> body = action_list();
        punct("}");
        if (body.empty()) {
            u.protocol = behavior::skip();
            u.protocol.span = body_span;
        } else if (body.size() == 1) {
            u.protocol = std::move(body.front());
        } else {
            u.protocol = behavior::seq(std::move(body));
            u.protocol.span = body_span;
        }
        punct("}");
        close_span(u.span);
        return u;
    }

    Channel channel() {
        Channel ch;
        ch.span = peek().span;
        keyword("connect");
        std::vector<std::string> head{name()};
        while (accept_punct(".")) head.push_back(name());
        if (accept_punct(":")) {
            for (std::size_t i = 0; i < head.size(); ++i) ch.id += (i ? "." : "") + head[i];
            ch.sender = port_ref();
        } else if (head.size() == 2) {
            ch.sender = {head[0], head[1]};
            ch.id = ch.sender.str();
        } else {
            fail({".", ":"});
        }
        punct("->");
        ch.receiver = port_ref();
        if (accept_keyword("synchronous")) {
            ch.mode = ChannelMode::synchronous;
        } else if (accept_keyword("buffered")) {
            ch.mode = ChannelMode::buffered;
            if (peek().type == Tok::integer) ch.capacity = integer();
        } else if (accept_keyword("ready")) {
            ch.mode = ChannelMode::ready;
        }
        punct(";");
        close_span(ch.span);
        return ch;
    }

    CollectiveGroup collective() {
        CollectiveGroup g;
        g.span = peek().span;
        keyword("collective");
        g.id = name();
        bool stream = false;
        int n = stream_suffix(stream);
        if (stream) g.nesting = n;
        punct("{");
        if (!at_punct("}")) {
            do {
                g.members.push_back(port_ref());
            } while (accept_punct(","));
        }
        punct("}");
        accept_punct(";");
        close_span(g.span);
        return g;
    }

    std::vector<Action> action_list() {
        std::vector<Action> out;
        while (!at_punct("}")) {
            out.push_back(action());
            if (!accept_punct(";")) break;
        }
        return out;
    }

    Action block(ActionKind k) {
        Span s = peek().span;
        ++pos_;
        punct("{");
        std::vector<Action> parts = action_list();
        punct("}");
        Action a;
        a.kind = k;
        a.children = std::move(parts);
        a.span = s;
        close_span(a.span);
        return a;
    }

    StreamPredicate predicate() {
        StreamPredicate p;
        do {
            behavior::Conjunction c;
            c.bracketed = accept_punct("<");
            do {
                c.ports.push_back(name());
            } while (accept_punct("&"));
            if (c.bracketed) punct(">");
            p.disjuncts.push_back(std::move(c));
        } while (accept_punct("|"));
        return p;
    }

    Action action() {
        Span s = peek().span;
        Action a;
        if (at_punct("(")) {
            ++pos_;
            a = action();
            punct(")");
            return a;
        }
        if (accept_keyword("skip")) {
            a = behavior::skip();
        } else if (at_keyword("seq")) {
            return block(ActionKind::seq);
        } else if (at_keyword("par")) {
            return block(ActionKind::par);
        } else if (at_keyword("alt")) {
            return block(ActionKind::alt);
        } else if (accept_keyword("repeat")) {
            if (accept_keyword("counter")) {
                int n = integer();
                a = behavior::repeat_counter(action(), n);
            } else {
                bool forever = accept_keyword("forever");
                Action body = action();
                if (!forever && accept_keyword("until")) {
                    a = behavior::repeat_until(std::move(body), predicate());
                } else {
                    a = behavior::repeat_forever(std::move(body));
                }
            }
        } else if (accept_keyword("if")) {
            StreamPredicate p = predicate();
            keyword("then");
            Action t = action();
            keyword("else");
            Action e = action();
            a = behavior::if_then_else(std::move(p), std::move(t), std::move(e));
        } else if (accept_keyword("signal")) {
            a = behavior::signal(simple_ident());
        } else if (accept_keyword("wait")) {
            a = behavior::wait(simple_ident());
        } else if (accept_keyword("do")) {
            a = behavior::do_collective(name());
        } else if (peek().type == Tok::ident && !keywords.count(peek().text)) {
            std::string id = name();
            if (accept_punct("!")) {
                a = behavior::send(id);
            } else if (accept_punct("?")) {
                a = behavior::receive(id);
            } else {
                fail({"!", "?"});
            }
        } else {
            fail({"skip", "seq", "par", "alt", "repeat", "if", "signal", "wait", "do", "(",
                  "port activation"});
        }
        a.span = s;
        close_span(a.span);
        return a;
    }
};

}  // namespace

Component parse_configuration(std::string_view text) {
    auto tokens = detail::preprocess(detail::lex(text));
    Parser p(std::move(tokens));
    return p.component();
}

}  // namespace hashnets::ahcl
