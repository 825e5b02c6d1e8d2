#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hashnets/petri/net.hpp"

namespace hashnets::petri {

using StateId = std::uint32_t;

enum class SearchOrder { breadth_first, depth_first };

struct ReachLimits {
    std::size_t max_states = 1'000'000;
    std::size_t max_depth = std::numeric_limits<std::size_t>::max();
    unsigned threads = 1;  // 0 picks the hardware concurrency; depth-first runs sequentially
    // Depth-first reaches deep states under a small cap; parent paths are then tree paths, not shortest.
    SearchOrder order = SearchOrder::breadth_first;
};

struct ReachEdge {
    std::uint32_t transition = 0;
    StateId target = 0;

    bool operator==(const ReachEdge&) const = default;
};

struct ReachStats {
    std::size_t states = 0;
    std::size_t edges = 0;
    std::size_t peak_frontier = 0;
    std::size_t depth = 0;
    std::size_t bytes = 0;
};

class ReachGraph {
public:
    [[nodiscard]] std::size_t size() const { return offsets_.size(); }
    [[nodiscard]] std::size_t place_count() const { return places_; }
    [[nodiscard]] Marking marking(StateId s) const;
    // Token count of one place without decoding the whole marking.
    [[nodiscard]] std::uint32_t tokens(StateId s, std::size_t place) const;
    [[nodiscard]] std::span<const ReachEdge> edges(StateId s) const;
    [[nodiscard]] std::size_t depth(StateId s) const { return depth_[s]; }
    // False when limits stopped the exploration before all successors were recorded.
    [[nodiscard]] bool expanded(StateId s) const { return expanded_[s] != 0; }
    [[nodiscard]] std::optional<StateId> find(const Marking& m) const;
    // Firing sequence (transition indices) from the root along parent links; shortest under breadth-first.
    [[nodiscard]] std::vector<std::uint32_t> path_to(StateId s) const;
    [[nodiscard]] std::optional<StateId> parent(StateId s) const;

    bool truncated = false;
    ReachStats stats;

    bool operator==(const ReachGraph& o) const;

private:
    friend ReachGraph reachability_graph(const InterlacedNet&, const ReachLimits&);

    std::size_t places_ = 0;
    std::vector<std::uint8_t> arena_;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint64_t> hashes_;
    std::vector<std::uint32_t> slots_;
    std::vector<std::uint64_t> edge_start_;
    std::vector<std::uint32_t> edge_count_;
    std::vector<ReachEdge> edges_;
    std::vector<std::uint32_t> depth_;
    std::vector<std::uint8_t> expanded_;
    std::vector<StateId> parent_;
    std::vector<std::uint32_t> parent_transition_;

    [[nodiscard]] std::span<const std::uint8_t> bytes(StateId s) const;
    [[nodiscard]] std::optional<StateId> lookup(std::span<const std::uint8_t> code, std::uint64_t h) const;
    StateId insert(std::span<const std::uint8_t> code, std::uint64_t h);
    void grow();
};

[[nodiscard]] ReachGraph reachability_graph(const InterlacedNet& n, const ReachLimits& limits = {});

}  // namespace hashnets::petri
