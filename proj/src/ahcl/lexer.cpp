#include "lexer.hpp"

#include <cctype>
#include <map>

#include "hashnets/ahcl/diagnostic.hpp"

namespace hashnets::ahcl::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            Span at{i, 2, line, col};
            advance(2);
            while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) advance(1);
            if (i + 1 >= text.size()) throw SyntaxError(at, {"*/"}, "end of input");
            advance(2);
            continue;
        }
        Token t;
        t.span = {i, 1, line, col};
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            t.type = Tok::ident;
            t.text = std::string(text.substr(i, j - i));
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            t.type = Tok::integer;
            t.text = std::string(text.substr(i, j - i));
            if (t.text.size() > 9) throw SyntaxError(t.span, {"integer below 10^9"}, t.text);
            t.value = std::stoll(t.text);
        } else {
            static const char* two[] = {"->", "[/", "/]", "::"};
            t.type = Tok::punct;
            for (const char* p : two) {
                if (text.substr(i, 2) == p) t.text = p;
            }
            if (t.text.empty()) {
                static const std::string singles = "{}()[];,.:!?<>&|=+-*";
                if (singles.find(c) == std::string::npos) {
                    throw SyntaxError(t.span, {"token"}, std::string(1, c));
                }
                t.text = std::string(1, c);
            }
        }
        t.span.length = t.text.size();
        advance(t.text.size());
        out.push_back(std::move(t));
    }
    Token end;
    end.type = Tok::end;
    end.span = {text.size(), 0, line, col};
    out.push_back(end);
    return out;
}

namespace {

struct Env {
    std::map<std::string, long long> values;
};

struct Iterator {
    std::string name;
    long long lo = 0;
    long long hi = 0;
};

bool is_op(const Token& t) {
    if (t.type == Tok::punct) {
        return t.text == "+" || t.text == "-" || t.text == "*" || t.text == "(" || t.text == ")";
    }
    return t.type == Tok::ident && t.text == "mod";
}

// Recursive-descent evaluation over a token slice.
struct ExprEval {
    const std::vector<Token>& toks;
    std::size_t pos;
    std::size_t stop;
    const Env& env;

    const Token& peek() const { return toks[pos < stop ? pos : stop]; }

    [[noreturn]] void fail(const char* what) const {
        const Token& t = toks[pos < stop ? pos : stop];
        throw SyntaxError(t.span, {what}, t.text.empty() ? "end of expression" : t.text);
    }

    long long primary() {
        if (pos >= stop) fail("expression");
        const Token& t = toks[pos];
        if (t.type == Tok::integer) {
            ++pos;
            return t.value;
        }
        if (t.type == Tok::ident && t.text != "mod") {
            auto it = env.values.find(t.text);
            if (it == env.values.end()) fail("bound index variable or constant");
            ++pos;
            return it->second;
        }
        if (t.type == Tok::punct && t.text == "-") {
            ++pos;
            return -primary();
        }
        if (t.type == Tok::punct && t.text == "(") {
            ++pos;
            long long v = sum();
            if (pos >= stop || toks[pos].text != ")") fail(")");
            ++pos;
            return v;
        }
        fail("expression");
    }

    long long product() {
        long long v = primary();
        while (pos < stop) {
            const Token& t = toks[pos];
            if (t.type == Tok::punct && t.text == "*") {
                ++pos;
                v *= primary();
            } else if (t.type == Tok::ident && t.text == "mod") {
                ++pos;
                long long m = primary();
                if (m == 0) fail("non-zero modulus");
                v = ((v % m) + m) % m;
            } else {
                break;
            }
        }
        return v;
    }

    long long sum() {
        long long v = product();
        while (pos < stop && toks[pos].type == Tok::punct &&
               (toks[pos].text == "+" || toks[pos].text == "-")) {
            bool plus = toks[pos].text == "+";
            ++pos;
            long long r = product();
            v = plus ? v + r : v - r;
        }
        return v;
    }

    long long all() {
        long long v = sum();
        if (pos != stop) fail("end of expression");
        return v;
    }
};

long long eval(const std::vector<Token>& toks, std::size_t from, std::size_t to, const Env& env) {
    ExprEval e{toks, from, to, env};
    return e.all();
}

std::size_t matching(const std::vector<Token>& toks, std::size_t open, const std::string& left,
                     const std::string& right) {
    int depth = 0;
    for (std::size_t j = open; j < toks.size(); ++j) {
        if (toks[j].type != Tok::punct) continue;
        if (toks[j].text == left) ++depth;
        if (toks[j].text == right && --depth == 0) return j;
    }
    throw SyntaxError(toks[open].span, {right}, "end of input");
}

Token int_token(long long v, Span span) {
    Token t;
    t.type = Tok::integer;
    t.value = v;
    t.text = std::to_string(v);
    t.span = span;
    return t;
}

class Preprocessor {
public:
    std::vector<Token> run(const std::vector<Token>& toks) {
        std::vector<Token> out;
        Env env;
        process(toks, 0, toks.size() - 1, env, out);
        out.push_back(toks.back());
        return out;
    }

private:
    std::vector<Iterator> iterators_;

    const Token& at(const std::vector<Token>& toks, std::size_t i, std::size_t stop) const {
        return toks[i < stop ? i : stop];
    }

    void expect(const std::vector<Token>& toks, std::size_t& i, std::size_t stop,
                const std::string& text) {
        const Token& t = at(toks, i, stop);
        if (i >= stop || t.text != text) throw SyntaxError(t.span, {text}, t.text);
        ++i;
    }

    std::string ident(const std::vector<Token>& toks, std::size_t& i, std::size_t stop) {
        const Token& t = at(toks, i, stop);
        if (i >= stop || t.type != Tok::ident) throw SyntaxError(t.span, {"identifier"}, t.text);
        ++i;
        return t.text;
    }

    std::size_t find_top(const std::vector<Token>& toks, std::size_t from, std::size_t stop,
                         const std::string& text) {
        int depth = 0;
        for (std::size_t j = from; j < stop; ++j) {
            const auto& t = toks[j];
            if (depth == 0 && t.type == Tok::punct && t.text == text) return j;
            if (t.type == Tok::punct && (t.text == "(" || t.text == "[")) ++depth;
            if (t.type == Tok::punct && (t.text == ")" || t.text == "]")) --depth;
        }
        throw SyntaxError(at(toks, stop, stop).span, {text}, "end of input");
    }

    void process(const std::vector<Token>& toks, std::size_t i, std::size_t stop, Env& env,
                 std::vector<Token>& out) {
        while (i < stop) {
            const Token& t = toks[i];
            if (t.type == Tok::ident && t.text == "const") {
                ++i;
                std::string name = ident(toks, i, stop);
                expect(toks, i, stop, "=");
                std::size_t semi = find_top(toks, i, stop, ";");
                env.values[name] = eval(toks, i, semi, env);
                i = semi + 1;
                continue;
            }
            if (t.type == Tok::ident && t.text == "iterator") {
                ++i;
                std::vector<std::string> names{ident(toks, i, stop)};
                while (at(toks, i, stop).text == ",") {
                    ++i;
                    names.push_back(ident(toks, i, stop));
                }
                if (at(toks, i, stop).text != "range") {
                    throw SyntaxError(at(toks, i, stop).span, {"range"}, at(toks, i, stop).text);
                }
                ++i;
                expect(toks, i, stop, "[");
                std::size_t comma = find_top(toks, i, stop, ",");
                long long lo = eval(toks, i, comma, env);
                i = comma + 1;
                std::size_t close = find_top(toks, i, stop, "]");
                long long hi = eval(toks, i, close, env);
                i = close + 1;
                if (i < stop && toks[i].text == ";") ++i;
                for (auto& n : names) iterators_.push_back({n, lo, hi});
                continue;
            }
            if (t.type == Tok::punct && t.text == "[/") {
                std::size_t close = matching(toks, i, "[/", "/]");
                expand_block(toks, i + 1, close, env, out);
                i = close + 1;
                continue;
            }
            if (t.type == Tok::ident && env.values.count(t.text)) {
                out.push_back(int_token(env.values.at(t.text), t.span));
                ++i;
                continue;
            }
            if (t.type == Tok::punct && t.text == "[") {
                std::size_t close = matching(toks, i, "[", "]");
                if (close <= stop && index_expression(toks, i + 1, close, env)) {
                    out.push_back(t);
                    Span s = toks[i + 1].span;
                    out.push_back(int_token(eval(toks, i + 1, close, env), s));
                    out.push_back(toks[close]);
                    i = close + 1;
                    continue;
                }
            }
            out.push_back(t);
            ++i;
        }
    }

    bool index_expression(const std::vector<Token>& toks, std::size_t from, std::size_t to,
                          const Env& env) const {
        if (from >= to) return false;
        bool evaluable = false;
        for (std::size_t j = from; j < to; ++j) {
            const auto& t = toks[j];
            if (t.type == Tok::integer) continue;
            if (is_op(t)) {
                evaluable = true;
                continue;
            }
            if (t.type == Tok::ident && env.values.count(t.text)) {
                evaluable = true;
                continue;
            }
            return false;
        }
        return evaluable;
    }

    void expand_block(const std::vector<Token>& toks, std::size_t from, std::size_t to,
                      const Env& env, std::vector<Token>& out) {
        std::vector<const Iterator*> used;
        for (const auto& it : iterators_) {
            if (env.values.count(it.name)) continue;
            for (std::size_t j = from; j < to; ++j) {
                if (toks[j].type == Tok::ident && toks[j].text == it.name) {
                    used.push_back(&it);
                    break;
                }
            }
        }
        Env local = env;
        enumerate(toks, from, to, used, 0, local, out);
    }

    void enumerate(const std::vector<Token>& toks, std::size_t from, std::size_t to,
                   const std::vector<const Iterator*>& used, std::size_t k, Env& env,
                   std::vector<Token>& out) {
        if (k == used.size()) {
            Env copy = env;
            process(toks, from, to, copy, out);
            return;
        }
        for (long long v = used[k]->lo; v <= used[k]->hi; ++v) {
            env.values[used[k]->name] = v;
            enumerate(toks, from, to, used, k + 1, env, out);
        }
        env.values.erase(used[k]->name);
    }
};

}  // namespace

std::vector<Token> preprocess(const std::vector<Token>& tokens) {
    Preprocessor p;
    return p.run(tokens);
}

}  // namespace hashnets::ahcl::detail
