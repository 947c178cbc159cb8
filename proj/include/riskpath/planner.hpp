#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riskpath/env.hpp"

namespace riskpath {

struct Path {
    std::vector<NodeId> nodes;
    double total_distance = 0.0;
    double success_probability = 1.0;

    NodeId front() const { return nodes.front(); }
    NodeId back() const { return nodes.back(); }
    std::size_t edge_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    bool contains(NodeId n) const;

    friend bool operator==(const Path&, const Path&) = default;
};

/// Builds a Path from an explicit node sequence, computing distance and
/// success probability against `view`. Throws Error(InvalidPath) if the
/// sequence is empty or two consecutive nodes are not adjacent.
Path make_path(const GraphView& view, std::vector<NodeId> nodes);

// Path costs are compared as fixed-point integers so that sums are exact and
// independent of summation order; equal costs then fall through to the
// documented tie-breaks.
inline constexpr double kDistanceQuantum = 1e-9;
inline constexpr double kLogWeightScale = 1099511627776.0;  // 2^40

std::int64_t quantized_distance(double distance);
/// Fixed-point value of -ln(effective_success).
std::int64_t quantized_log_weight(const OutcomeProbs& probs);

/// Minimum-distance path; ties go to the lexicographically smallest node
/// sequence. Returns nullopt when goal is unreachable.
std::optional<Path> shortest_distance_path(const GraphView& view, NodeId start, NodeId goal);

/// Path maximising the product of effective_success over its edges, found by
/// Dijkstra over -ln weights. Ties: smaller distance, then lexicographic.
std::optional<Path> max_success_path(const GraphView& view, NodeId start, NodeId goal);

/// All-pairs max_success_path table. Immutable after construction, so it can
/// be shared by concurrent episode runs.
class PathTable {
public:
    explicit PathTable(const GraphView& view);

    const std::optional<Path>& at(NodeId start, NodeId goal) const;
    std::size_t node_count() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<std::optional<Path>> paths_;
};

struct MissionSpec {
    std::optional<NodeId> start;  // nullopt: uniformly random start
    std::vector<NodeId> tasks;    // un-ordered, kept sorted and unique
    NodeId end = 0;
    std::vector<NodeId> safe_locations;
    double threshold = 0.9;
    std::uint32_t hold_limit = 10;

    /// Throws Error(InvalidInput) naming the offending field.
    void validate(const EnvironmentGraph& graph) const;
};

struct MissionPlan {
    std::vector<NodeId> ordered_tasks;  // tasks in visiting order, then end
    std::vector<Path> legs;
    double plan_probability = 1.0;
    double plan_distance = 0.0;
    bool heuristic = false;  // true when the greedy fallback produced the order
};

enum class OrderingMode { Automatic, Exhaustive, Greedy };

inline constexpr std::size_t kExhaustiveTaskLimit = 8;

/// Orders the mission's tasks starting from `from`, then appends `end`.
/// Automatic uses exhaustive permutation search up to kExhaustiveTaskLimit
/// tasks and the nearest-task greedy order beyond. A precomputed `table` for
/// the same view avoids recomputing legs.
MissionPlan order_tasks(const GraphView& view, const MissionSpec& spec, NodeId from,
                        OrderingMode mode = OrderingMode::Automatic,
                        const PathTable* table = nullptr);

}  // namespace riskpath
