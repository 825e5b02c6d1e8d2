#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hashnets/ahcl/ast.hpp"
#include "hashnets/analyze/ctl.hpp"
#include "hashnets/translate/translate.hpp"

namespace hashnets::analyze {

struct CtlSyntaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownMacro : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownChannel : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownPortRef : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MacroArityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MacroRecursion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MacroDef {
    std::string name;
    std::vector<std::string> params;
    std::string body;
    int line = 0;
};

struct FormulaLine {
    std::string text;
    int line = 0;
};

// `const N = 5`, `name[v1,...] :: body`, `name :: body`; any other line is a formula to check.
struct FormulaFile {
    std::map<std::string, long long> consts;
    std::map<std::string, MacroDef> macros;
    std::vector<FormulaLine> formulas;
};

[[nodiscard]] FormulaFile parse_formula_file(const std::string& text);
// Later files override constants and macros of earlier ones; formulas accumulate.
void merge(FormulaFile& into, const FormulaFile& from);

// What the built-in macros need to know about the model.
struct ModelContext {
    const petri::InterlacedNet& net;
    const ahcl::Component* component = nullptr;
    const std::vector<translate::UnitFlow>* flows = nullptr;
};

// Expands macros and quantifiers into a flat formula over the net's places and transitions.
[[nodiscard]] CtlPtr expand_macros(const std::string& formula, const FormulaFile& lib, const ModelContext& ctx);

// Names of the built-in macros.
[[nodiscard]] const std::vector<std::string>& builtin_macros();

}  // namespace hashnets::analyze
