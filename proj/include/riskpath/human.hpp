#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riskpath/env.hpp"
#include "riskpath/planner.hpp"
#include "riskpath/rng.hpp"

namespace riskpath {

struct HumanState {
    NodeId position = 0;
    std::optional<NodeId> goal;
    double uncertainty = 0.0;  // per-step probability of a random move
    std::optional<Path> predicted_path;  // starts at position, ends at goal
};

struct HeatParams {
    double path_heat = 0.35;
    double neighbor_heat = 0.006;
    // Moves ahead covered by the uncertainty heat; 1 heats only the edges at
    // the human's position.
    std::uint32_t neighbor_reach = 3;
};

/// Per-edge heat in [0, 1) for one environment.
class HeatMap {
public:
    explicit HeatMap(std::size_t edge_count) : heat_(edge_count, 0.0) {}

    double at(EdgeIndex e) const { return heat_.at(e); }
    /// Max-combines `value` into edge `e`. Throws unless value is in [0, 1).
    void raise(EdgeIndex e, double value);

    std::size_t edge_count() const noexcept { return heat_.size(); }
    bool empty() const;

private:
    std::vector<double> heat_;
};

/// An environment whose edge probabilities are penalised by a heat map. Holds
/// a pointer to the base graph, which must outlive it.
class HeatedGraph {
public:
    const EnvironmentGraph& base() const noexcept { return *base_; }
    GraphView view() const noexcept { return GraphView{base_, probs_}; }

    const OutcomeProbs& edge_probs(EdgeIndex e) const { return probs_.at(e); }
    bool overridden(EdgeIndex e) const;
    const std::vector<EdgeIndex>& overridden_edges() const noexcept { return overridden_; }

private:
    friend HeatedGraph apply_heat(const EnvironmentGraph&, const HeatMap&);
    HeatedGraph(const EnvironmentGraph& base, std::vector<OutcomeProbs> probs,
                std::vector<EdgeIndex> overridden)
        : base_(&base), probs_(std::move(probs)), overridden_(std::move(overridden)) {}

    const EnvironmentGraph* base_;
    std::vector<OutcomeProbs> probs_;
    std::vector<EdgeIndex> overridden_;
};

/// Distance-only shortest path from the human's position to its goal.
/// Throws Error(NoPath) when the goal is unreachable and Error(InvalidInput)
/// when the human has no goal.
Path predict_human_path(const EnvironmentGraph& graph, const HumanState& human);

/// (a) Edges with an endpoint on the predicted path get path_heat.
/// (b) Edges incident to any node within neighbor_reach - 1 moves of the
///     human's position get at least neighbor_heat * uncertainty.
HeatMap build_heat_map(const EnvironmentGraph& graph, const HumanState& human,
                       const HeatParams& params);

/// For each heated edge: p_success' = p_success * (1 - heat), p_retry
/// unchanged, and the removed success mass is added to p_fail.
HeatedGraph apply_heat(const EnvironmentGraph& graph, const HeatMap& heat);

/// One human tick. With probability 1 - uncertainty the human advances one
/// node along its predicted path (staying put at the goal or without a path);
/// otherwise it moves to a uniformly random neighbour and, if it has a goal,
/// re-predicts the path from there.
HumanState step_human(const EnvironmentGraph& graph, const HumanState& human, Rng& rng);

}  // namespace riskpath
