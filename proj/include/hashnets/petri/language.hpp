#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hashnets/petri/reach.hpp"

namespace hashnets::petri {

using Word = std::vector<std::string>;

struct LanguageResult {
    std::set<Word> words;
    bool truncated = false;  // some reachable state within the bound was not fully explored
};

struct NoFinalMarking : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Words of visible labels (silent transitions erased) up to `maxlen` symbols.
[[nodiscard]] LanguageResult terminal_language(const InterlacedNet& n, const ReachGraph& g, std::size_t maxlen);
[[nodiscard]] LanguageResult net_language(const InterlacedNet& n, const ReachGraph& g, std::size_t maxlen);
[[nodiscard]] LanguageResult terminal_language(const InterlacedNet& n, std::size_t maxlen,
                                               const ReachLimits& limits = {});
[[nodiscard]] LanguageResult net_language(const InterlacedNet& n, std::size_t maxlen,
                                          const ReachLimits& limits = {});

}  // namespace hashnets::petri
