#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hashnets/behavior/action.hpp"

namespace hashnets::ahcl {

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity = Severity::error;
    Span span;
    std::string message;
};

// "file:line:col: severity: message"
[[nodiscard]] std::string format(const Diagnostic& d, const std::string& file);

struct ValidationReport {
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool empty() const { return diagnostics.empty(); }
    [[nodiscard]] bool has_errors() const;
};

struct SyntaxError : std::runtime_error {
    SyntaxError(Span where, std::set<std::string> expected_set, const std::string& found);

    Span span;
    std::set<std::string> expected;
    std::string found;

    [[nodiscard]] int line() const { return span.line; }
    [[nodiscard]] int column() const { return span.column; }
    [[nodiscard]] Diagnostic diagnostic() const;
};

struct DuplicateIdentifier : std::runtime_error {
    DuplicateIdentifier(Span where, const std::string& what, const std::string& id);

    Span span;
    std::string identifier;

    [[nodiscard]] Diagnostic diagnostic() const;
};

}  // namespace hashnets::ahcl
