#include "riskpath/human.hpp"

#include <algorithm>
#include <string>

#include "riskpath/error.hpp"

namespace riskpath {

void HeatMap::raise(EdgeIndex e, double value) {
    if (!(value >= 0.0) || !(value < 1.0))
        throw Error(ErrorKind::InvalidInput, "heat must lie in [0, 1)");
    heat_.at(e) = std::max(heat_.at(e), value);
}

bool HeatMap::empty() const {
    return std::all_of(heat_.begin(), heat_.end(), [](double h) { return h == 0.0; });
}

bool HeatedGraph::overridden(EdgeIndex e) const {
    return std::binary_search(overridden_.begin(), overridden_.end(), e);
}

Path predict_human_path(const EnvironmentGraph& graph, const HumanState& human) {
    if (!human.goal) throw Error(ErrorKind::InvalidInput, "human has no goal to predict");
    auto path = shortest_distance_path(graph.view(), human.position, *human.goal);
    if (!path)
        throw Error(ErrorKind::NoPath, "human goal " + std::to_string(*human.goal) +
                                           " is unreachable from " +
                                           std::to_string(human.position));
    return *path;
}

HeatMap build_heat_map(const EnvironmentGraph& graph, const HumanState& human,
                       const HeatParams& params) {
    HeatMap heat(graph.edge_count());
    if (human.predicted_path && params.path_heat > 0.0) {
        for (NodeId n : human.predicted_path->nodes) {
            for (const Neighbor& nb : graph.neighbors(n)) heat.raise(nb.edge, params.path_heat);
        }
    }
    const double local = params.neighbor_heat * human.uncertainty;
    if (local > 0.0) {
        // Breadth-first over the nodes the human can reach in fewer than
        // neighbor_reach moves; every edge leaving them is heated.
        std::vector<bool> seen(graph.node_count(), false);
        std::vector<NodeId> frontier{human.position};
        seen[human.position] = true;
        for (std::uint32_t hop = 0; hop < params.neighbor_reach; ++hop) {
            std::vector<NodeId> next;
            for (NodeId n : frontier) {
                for (const Neighbor& nb : graph.neighbors(n)) {
                    heat.raise(nb.edge, local);
                    if (!seen[nb.node]) {
                        seen[nb.node] = true;
                        next.push_back(nb.node);
                    }
                }
            }
            frontier = std::move(next);
        }
    }
    return heat;
}

HeatedGraph apply_heat(const EnvironmentGraph& graph, const HeatMap& heat) {
    if (heat.edge_count() != graph.edge_count())
        throw Error(ErrorKind::InvalidInput, "heat map was built for a different graph");
    std::vector<OutcomeProbs> probs(graph.view().probs.begin(), graph.view().probs.end());
    std::vector<EdgeIndex> overridden;
    for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
        const double h = heat.at(e);
        if (h == 0.0) continue;
        const OutcomeProbs& base = graph.edge_probs(e);
        probs[e] = OutcomeProbs::make(base.p_success() * (1.0 - h), base.p_retry());
        overridden.push_back(e);
    }
    return HeatedGraph(graph, std::move(probs), std::move(overridden));
}

HumanState step_human(const EnvironmentGraph& graph, const HumanState& human, Rng& rng) {
    HumanState next = human;
    if (next.goal && !next.predicted_path) next.predicted_path = predict_human_path(graph, next);

    if (!rng.bernoulli(human.uncertainty)) {
        if (next.predicted_path && next.predicted_path->nodes.size() > 1) {
            auto& nodes = next.predicted_path->nodes;
            nodes.erase(nodes.begin());
            next.predicted_path = make_path(graph.view(), std::move(nodes));
            next.position = next.predicted_path->front();
        }
        return next;
    }

    const auto around = graph.neighbors(human.position);
    if (!around.empty()) next.position = around[rng.below(around.size())].node;
    next.predicted_path.reset();
    if (next.goal) next.predicted_path = predict_human_path(graph, next);
    return next;
}

}  // namespace riskpath
