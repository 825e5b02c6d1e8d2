#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hashnets/petri/net.hpp"

namespace hashnets::translate::detail {

using ArcList = std::vector<std::pair<std::string, unsigned>>;

// "base[a,b,...]"
[[nodiscard]] std::string node(const std::string& base, std::initializer_list<std::string> args);

// Adds nodes to a slice; every node also carries the ("node", id) qualifier.
class Builder {
public:
    explicit Builder(petri::InterlacedNet& net) : net_(net) {}

    const std::string& place(const std::string& id, unsigned initial = 0, petri::QualifierSet q = {});
    const std::string& transition(const std::string& id, std::optional<std::string> label = std::nullopt,
                                  petri::QualifierSet q = {});
    void arc(const std::string& from, const std::string& to, unsigned weight = 1);
    // Take-and-return pair: tests a place without changing it.
    void read(const std::string& place, const std::string& transition);
    // Declares the places of `pre`/`post` and wires them to `t`.
    void wire(const std::string& t, const ArcList& pre, const ArcList& post);

    petri::InterlacedNet& net() { return net_; }

private:
    petri::InterlacedNet& net_;
};

}  // namespace hashnets::translate::detail
