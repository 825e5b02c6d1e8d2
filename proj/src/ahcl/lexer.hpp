#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hashnets/behavior/action.hpp"

namespace hashnets::ahcl::detail {

enum class Tok { ident, integer, punct, end };

struct Token {
    Tok type = Tok::end;
    std::string text;
    long long value = 0;
    Span span;
};

// Throws SyntaxError on characters outside the token alphabet.
std::vector<Token> lex(std::string_view text);

// Resolves `const`, `iterator` and `[/ ... /]` blocks; evaluates index expressions.
std::vector<Token> preprocess(const std::vector<Token>& tokens);

}  // namespace hashnets::ahcl::detail
