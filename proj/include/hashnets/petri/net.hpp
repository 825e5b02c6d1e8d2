#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace hashnets::petri {

using Atom = std::variant<long long, std::string>;
using Qualifier = std::vector<Atom>;
using QualifierSet = std::set<Qualifier>;

[[nodiscard]] std::string to_string(const Qualifier& q);

struct Place {
    std::string id;
    QualifierSet qualifiers;
};

struct Transition {
    std::string id;
    QualifierSet qualifiers;
    std::optional<std::string> label;  // nullopt is the silent label
};

struct Arc {
    bool from_place = true;  // place -> transition when true
    std::size_t place = 0;
    std::size_t transition = 0;
    unsigned weight = 1;
};

enum class FinalOp { eq, ge };

struct FinalAtom {
    std::string place;
    FinalOp op = FinalOp::ge;
    unsigned count = 1;

    bool operator==(const FinalAtom&) const = default;
    auto operator<=>(const FinalAtom&) const = default;
};

// Dense token counts indexed by place position.
using Marking = std::vector<std::uint32_t>;

struct LabelConflict : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SortClash : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownNode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class InterlacedNet {
public:
    // Re-adding an existing id merges qualifiers (and adds `initial` tokens).
    std::size_t add_place(const std::string& id, QualifierSet q = {}, unsigned initial = 0);
    // Re-adding an existing id merges qualifiers; two different visible labels throw LabelConflict.
    std::size_t add_transition(const std::string& id, std::optional<std::string> label = std::nullopt,
                               QualifierSet q = {});
    // Parallel arcs between the same endpoints accumulate their weights.
    void add_arc(const std::string& from, const std::string& to, unsigned weight = 1);
    void set_initial(const std::string& place, unsigned count);
    void add_final(FinalAtom atom);
    void clear_final() { final_.reset(); }

    [[nodiscard]] const std::vector<Place>& places() const { return places_; }
    [[nodiscard]] const std::vector<Transition>& transitions() const { return transitions_; }
    [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }
    [[nodiscard]] const std::optional<std::vector<FinalAtom>>& final_predicate() const { return final_; }

    [[nodiscard]] std::optional<std::size_t> place_index(const std::string& id) const;
    [[nodiscard]] std::optional<std::size_t> transition_index(const std::string& id) const;
    // Looks up an id, then falls back to ("node", id) qualifiers kept from merged slices.
    [[nodiscard]] std::optional<std::size_t> find_place(const std::string& name) const;
    [[nodiscard]] std::optional<std::size_t> find_transition(const std::string& name) const;

    [[nodiscard]] Marking initial_marking() const;
    [[nodiscard]] unsigned initial(std::size_t place) const;
    [[nodiscard]] bool is_final(const Marking& m) const;

    // (place, weight) lists per transition.
    [[nodiscard]] const std::vector<std::pair<std::size_t, unsigned>>& pre(std::size_t t) const;
    [[nodiscard]] const std::vector<std::pair<std::size_t, unsigned>>& post(std::size_t t) const;

    // Structural equality: same ids, qualifiers, labels, arcs, initial marking, final predicate.
    bool operator==(const InterlacedNet& o) const;

private:
    std::vector<Place> places_;
    std::vector<Transition> transitions_;
    std::vector<Arc> arcs_;
    std::vector<unsigned> initial_;
    std::optional<std::vector<FinalAtom>> final_;
    std::unordered_map<std::string, std::size_t> place_ids_;
    std::unordered_map<std::string, std::size_t> transition_ids_;
    std::map<std::tuple<bool, std::size_t, std::size_t>, std::size_t> arc_ids_;

    mutable bool compiled_ = false;
    mutable std::vector<std::vector<std::pair<std::size_t, unsigned>>> pre_;
    mutable std::vector<std::vector<std::pair<std::size_t, unsigned>>> post_;
    mutable std::unordered_map<std::string, std::size_t> place_aliases_;
    mutable std::unordered_map<std::string, std::size_t> transition_aliases_;

    void compile() const;
    void touch() { compiled_ = false; }
};

// Componentwise union; shared ids are the same node.
[[nodiscard]] InterlacedNet unite(const InterlacedNet& a, const InterlacedNet& b);

// Quotient by "qualifier sets intersect", per sort.
[[nodiscard]] InterlacedNet unfold(const InterlacedNet& n);
// Union of all slices followed by the quotient.
[[nodiscard]] InterlacedNet unfold(const std::vector<InterlacedNet>& slices);

}  // namespace hashnets::petri
