#include <algorithm>
#include <cctype>
#include <set>

#include "builtins.hpp"
#include "hashnets/analyze/formula.hpp"

namespace hashnets::analyze {

namespace {

using detail::Value;

enum class Tk { ident, number, punct, end };

struct Token {
    Tk type = Tk::end;
    std::string text;
    long long value = 0;
    std::size_t pos = 0;
};

std::vector<Token> lex(const std::string& s) {
    static const std::vector<std::string> puncts{"=>", ">=", "<=", "!=", "..", "::", "(", ")", "[", "]", ",",
                                                 ":",  "&",  "|",  "!",  "=",  ">",  "<", "+", "-", "*", "/", "."};
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.pos = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            t.type = Tk::number;
            t.text = s.substr(i, j - i);
            t.value = std::stoll(t.text);
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
            t.type = Tk::ident;
            t.text = s.substr(i, j - i);
            i = j;
        } else {
            auto it = std::find_if(puncts.begin(), puncts.end(),
                                   [&](const std::string& p) { return s.compare(i, p.size(), p) == 0; });
            if (it == puncts.end()) throw CtlSyntaxError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i));
            t.type = Tk::punct;
            t.text = *it;
            i += it->size();
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = s.size();
    out.push_back(end);
    return out;
}

const std::set<std::string> temporal{"EX", "AX", "EF", "AF", "EG", "AG"};

struct Frame {
    std::map<std::string, Value> vars;
};

class Expander {
public:
    Expander(const FormulaFile& lib, const ModelContext& ctx) : lib_(lib), ctx_(ctx) {}

    CtlPtr expand(const std::string& text, const std::map<std::string, Value>& vars) {
        Parser p{*this, lex(text), 0, vars};
        auto f = p.formula();
        if (p.peek().type != Tk::end) p.fail("end of formula");
        return f;
    }

private:
    const FormulaFile& lib_;
    const ModelContext& ctx_;
    std::vector<std::string> stack_;

    struct Parser {
        Expander& ex;
        std::vector<Token> toks;
        std::size_t i;
        std::map<std::string, Value> vars;

        const Token& peek(std::size_t k = 0) const { return toks[std::min(i + k, toks.size() - 1)]; }
        bool is(const std::string& p, std::size_t k = 0) const {
            const auto& t = peek(k);
            return (t.type == Tk::punct || t.type == Tk::ident) && t.text == p;
        }
        bool accept(const std::string& p) {
            if (!is(p)) return false;
            ++i;
            return true;
        }
        [[noreturn]] void fail(const std::string& expected) const {
            const auto& t = peek();
            throw CtlSyntaxError("expected " + expected + " at offset " + std::to_string(t.pos) + ", found '" +
                                 (t.type == Tk::end ? std::string("end") : t.text) + "'");
        }
        void expect(const std::string& p) {
            if (!accept(p)) fail("'" + p + "'");
        }
        std::string ident() {
            if (peek().type != Tk::ident) fail("identifier");
            return toks[i++].text;
        }

        CtlPtr formula() {
            auto a = disjunction();
            if (accept("=>")) return ctl_binary(CtlOp::implies, a, formula());
            return a;
        }
        CtlPtr disjunction() {
            auto a = conjunction();
            while (accept("|")) a = ctl_binary(CtlOp::or_, a, conjunction());
            return a;
        }
        CtlPtr conjunction() {
            auto a = unary();
            while (accept("&")) a = ctl_binary(CtlOp::and_, a, unary());
            return a;
        }

        CtlPtr unary() {
            if (accept("!")) return ctl_unary(CtlOp::not_, unary());
            const auto& t = peek();
            if (t.type == Tk::ident && temporal.count(t.text)) {
                ++i;
                static const std::map<std::string, CtlOp> ops{{"EX", CtlOp::EX}, {"AX", CtlOp::AX}, {"EF", CtlOp::EF},
                                                              {"AF", CtlOp::AF}, {"EG", CtlOp::EG}, {"AG", CtlOp::AG}};
                return ctl_unary(ops.at(t.text), unary());
            }
            if ((is("E") || is("A")) && is("[", 1)) {
                bool exists = is("E");
                i += 2;
                auto a = formula();
                expect("U");
                auto b = formula();
                expect("]");
                return ctl_binary(exists ? CtlOp::EU : CtlOp::AU, a, b);
            }
            if (is("forall") || is("exists")) return quantifier();
            return atom();
        }

        CtlPtr quantifier() {
            bool all = ident() == "forall";
            std::string var = ident();
            expect("in");
            long long lo = number(expr());
            expect("..");
            long long hi = number(expr());
            expect(":");
            std::size_t body = i;
            std::vector<CtlPtr> parts;
            auto saved = vars.find(var) != vars.end() ? std::optional<Value>(vars[var]) : std::nullopt;
            std::size_t end = body;
            if (lo > hi) {
                // Parse the body once for syntax, with the variable bound to the lower bound.
                vars[var] = lo;
                (void)formula();
                end = i;
            }
            for (long long v = lo; v <= hi; ++v) {
                vars[var] = v;
                i = body;
                parts.push_back(formula());
                end = i;
            }
            i = end;
            if (saved) {
                vars[var] = *saved;
            } else {
                vars.erase(var);
            }
            return all ? ctl_all(parts) : ctl_any(parts);
        }

        CtlPtr atom() {
            if (accept("(")) {
                auto f = formula();
                expect(")");
                return f;
            }
            if (accept("[")) {
                auto f = formula();
                expect("]");
                return f;
            }
            if (accept("true")) return ctl_const(true);
            if (accept("false")) return ctl_const(false);
            if (is("dead") && is("(", 1)) {
                i += 2;
                auto n = name();
                expect(")");
                return ctl_dead(ex.ctx_.net, n.full);
            }
            auto n = name();
            CtlPtr f;
            if (n.simple) {
                f = ex.call(n.head, n.args);
            }
            if (!f) {
                if (!ex.ctx_.net.find_place(n.full)) {
                    throw UnknownMacro("'" + n.full + "' is neither a macro nor a place");
                }
                f = ctl_place(ex.ctx_.net, n.full);
            }
            return comparison(f, n);
        }

        struct Name {
            std::string head;
            std::vector<Value> args;
            std::string full;
            bool simple = true;  // single segment, so it may name a macro
        };

        CtlPtr comparison(CtlPtr f, const Name& n) {
            static const std::vector<std::string> cmp{">=", "<=", "=", ">", "<"};
            auto it = std::find_if(cmp.begin(), cmp.end(), [&](const std::string& c) { return is(c); });
            if (it == cmp.end()) return f;
            if (f->op != CtlOp::ge || f->count != 1 || f->name.empty()) fail("a place before '" + *it + "'");
            ++i;
            long long k = number(expr());
            if (k < 0) throw CtlSyntaxError("token counts are non-negative");
            auto place = [&](CtlOp op, long long c) {
                return ctl_place(ex.ctx_.net, n.full, op, static_cast<unsigned>(c));
            };
            if (*it == ">=") return place(CtlOp::ge, k);
            if (*it == "=") return place(CtlOp::eq, k);
            if (*it == ">") return place(CtlOp::ge, k + 1);
            if (*it == "<") return ctl_unary(CtlOp::not_, place(CtlOp::ge, k));
            return ctl_unary(CtlOp::not_, place(CtlOp::ge, k + 1));
        }

        // ident ('[' args ']')* ('.' ident ('[' args ']')*)*
        Name name() {
            Name n;
            n.head = ident();
            n.full = n.head;
            bool first = true;
            for (;;) {
                while (accept("[")) {
                    std::vector<Value> args;
                    if (!is("]")) {
                        args.push_back(expr());
                        while (accept(",")) args.push_back(expr());
                    }
                    expect("]");
                    n.full += "[";
                    for (std::size_t k = 0; k < args.size(); ++k) n.full += (k ? "," : "") + detail::text(args[k]);
                    n.full += "]";
                    if (first && n.args.empty()) {
                        n.args = args;
                    } else {
                        n.simple = false;
                    }
                }
                first = false;
                if (!accept(".")) break;
                n.simple = false;
                n.full += "." + ident();
            }
            return n;
        }

        static long long number(const Value& v) {
            if (const auto* n = std::get_if<long long>(&v)) return *n;
            throw CtlSyntaxError("expected a number, found '" + std::get<std::string>(v) + "'");
        }

        Value expr() {
            Value a = term();
            while (is("+") || is("-")) {
                bool plus = toks[i++].text == "+";
                long long r = number(term());
                a = plus ? number(a) + r : number(a) - r;
            }
            return a;
        }
        Value term() {
            Value a = factor();
            while (is("*") || is("/") || is("mod")) {
                std::string op = toks[i++].text;
                long long r = number(factor());
                long long l = number(a);
                if (op != "*" && r == 0) throw CtlSyntaxError("division by zero");
                if (op == "*") {
                    a = l * r;
                } else if (op == "/") {
                    a = l / r;
                } else {
                    a = ((l % r) + r) % r;
                }
            }
            return a;
        }
        Value factor() {
            if (accept("-")) return -number(factor());
            if (accept("(")) {
                Value v = expr();
                expect(")");
                return v;
            }
            if (peek().type == Tk::number) return toks[i++].value;
            if (peek().type != Tk::ident) fail("expression");
            const std::string& id = peek().text;
            bool bare = !is("[", 1) && !is(".", 1);
            if (bare) {
                if (auto it = vars.find(id); it != vars.end()) {
                    ++i;
                    return it->second;
                }
                if (auto it = ex.lib_.consts.find(id); it != ex.lib_.consts.end()) {
                    ++i;
                    return it->second;
                }
            }
            return name().full;
        }
    };

    CtlPtr call(const std::string& name, const std::vector<Value>& args) {
        auto it = lib_.macros.find(name);
        if (it == lib_.macros.end()) {
            if (auto b = detail::builtin(name, args, ctx_)) return *b;
            return nullptr;
        }
        const MacroDef& m = it->second;
        if (m.params.size() != args.size()) {
            throw MacroArityMismatch("macro '" + name + "' takes " + std::to_string(m.params.size()) +
                                     " argument(s), got " + std::to_string(args.size()));
        }
        if (std::find(stack_.begin(), stack_.end(), name) != stack_.end()) {
            throw MacroRecursion("macro '" + name + "' expands into itself");
        }
        std::map<std::string, Value> vars;
        for (std::size_t k = 0; k < args.size(); ++k) vars[m.params[k]] = args[k];
        stack_.push_back(name);
        CtlPtr f;
        try {
            f = expand(m.body, vars);
        } catch (const CtlSyntaxError& e) {
            stack_.pop_back();
            throw CtlSyntaxError("in macro '" + name + "' (line " + std::to_string(m.line) + "): " + e.what());
        } catch (...) {
            stack_.pop_back();
            throw;
        }
        stack_.pop_back();
        return f;
    }
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

FormulaFile parse_formula_file(const std::string& text) {
    FormulaFile out;
    std::size_t start = 0;
    int line_no = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        std::string line = text.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
        start = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (auto c = line.find("//"); c != std::string::npos) line.erase(c);
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto where = [&](const std::string& msg) {
            return CtlSyntaxError("line " + std::to_string(line_no) + ": " + msg);
        };
        if (line.rfind("const ", 0) == 0) {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw where("expected 'const NAME = value'");
            std::string name = trim(line.substr(6, eq - 6));
            std::string value = trim(line.substr(eq + 1));
            try {
                std::size_t used = 0;
                long long v = std::stoll(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                out.consts[name] = v;
            } catch (const std::exception&) {
                throw where("constant '" + name + "' needs an integer value");
            }
            continue;
        }
        auto sep = line.find("::");
        if (sep == std::string::npos) {
            out.formulas.push_back({line, line_no});
            continue;
        }
        std::string head = trim(line.substr(0, sep));
        MacroDef m;
        m.line = line_no;
        m.body = trim(line.substr(sep + 2));
        auto br = head.find('[');
        m.name = trim(head.substr(0, br));
        if (br != std::string::npos) {
            if (head.back() != ']') throw where("macro parameters must be written [v1, v2, ...]");
            std::string params = head.substr(br + 1, head.size() - br - 2);
            std::size_t p = 0;
            while (p <= params.size()) {
                auto comma = params.find(',', p);
                std::string v = trim(params.substr(p, comma == std::string::npos ? std::string::npos : comma - p));
                if (v.empty()) throw where("empty macro parameter");
                m.params.push_back(v);
                if (comma == std::string::npos) break;
                p = comma + 1;
            }
        }
        if (m.name.empty() || m.body.empty()) throw where("macro needs a name and a body");
        out.macros[m.name] = std::move(m);
    }
    return out;
}

void merge(FormulaFile& into, const FormulaFile& from) {
    for (const auto& [k, v] : from.consts) into.consts[k] = v;
    for (const auto& [k, v] : from.macros) into.macros[k] = v;
    into.formulas.insert(into.formulas.end(), from.formulas.begin(), from.formulas.end());
}

CtlPtr expand_macros(const std::string& formula, const FormulaFile& lib, const ModelContext& ctx) {
    return Expander(lib, ctx).expand(formula, {});
}

}  // namespace hashnets::analyze
