#include "riskpath/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "riskpath/error.hpp"

namespace riskpath {

namespace {

// (primary, secondary) cost, compared lexicographically.
struct Key {
    std::int64_t primary = 0;
    std::int64_t secondary = 0;

    Key operator+(const Key& o) const { return {primary + o.primary, secondary + o.secondary}; }
    auto operator<=>(const Key&) const = default;
};

constexpr Key kUnreached{std::numeric_limits<std::int64_t>::max(), 0};

std::vector<NodeId> trace(const std::vector<NodeId>& pred, NodeId start, NodeId node) {
    std::vector<NodeId> seq{node};
    while (node != start) {
        node = pred[node];
        seq.push_back(node);
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
}

// Dijkstra with exact integer keys and lexicographic node-sequence
// tie-breaking. If `goal` is set the search stops once it is settled.
template <typename WeightFn>
std::vector<std::optional<std::vector<NodeId>>> dijkstra(const GraphView& view, NodeId start,
                                                         std::optional<NodeId> goal,
                                                         WeightFn weight) {
    const EnvironmentGraph& g = view.graph();
    const std::size_t n = g.node_count();
    std::vector<Key> key(n, kUnreached);
    std::vector<NodeId> pred(n, start);
    std::vector<bool> settled(n, false);

    using Entry = std::pair<Key, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    key[start] = Key{};
    frontier.push({Key{}, start});

    while (!frontier.empty()) {
        const auto [k, u] = frontier.top();
        frontier.pop();
        if (settled[u] || k != key[u]) continue;
        settled[u] = true;
        if (goal && *goal == u) break;

        for (const Neighbor& nb : g.neighbors(u)) {
            const NodeId v = nb.node;
            if (settled[v]) continue;
            const Key candidate = key[u] + weight(nb.edge);
            if (candidate < key[v]) {
                key[v] = candidate;
                pred[v] = u;
                frontier.push({candidate, v});
            } else if (candidate == key[v]) {
                auto via_u = trace(pred, start, u);
                auto current = trace(pred, start, pred[v]);
                via_u.push_back(v);
                current.push_back(v);
                if (std::lexicographical_compare(via_u.begin(), via_u.end(), current.begin(),
                                                 current.end()))
                    pred[v] = u;
            }
        }
    }

    std::vector<std::optional<std::vector<NodeId>>> out(n);
    for (NodeId v = 0; v < n; ++v) {
        if (settled[v]) out[v] = trace(pred, start, v);
    }
    return out;
}

void require_node(const EnvironmentGraph& g, NodeId n, const char* role) {
    if (!g.valid_node(n))
        throw Error(ErrorKind::InvalidInput,
                    std::string(role) + " node " + std::to_string(n) + " is not in the graph");
}

Key success_key(const GraphView& view, EdgeIndex e) {
    return {quantized_log_weight(view.edge_probs(e)),
            quantized_distance(view.graph().edge(e).distance)};
}

Key distance_key(const GraphView& view, EdgeIndex e) {
    return {quantized_distance(view.graph().edge(e).distance), 0};
}

Key leg_key(const GraphView& view, const Path& path) {
    Key total;
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const EdgeIndex e = *view.graph().find_edge(path.nodes[i], path.nodes[i + 1]);
        total = total + success_key(view, e);
    }
    return total;
}

std::optional<Path> single_pair(const GraphView& view, NodeId start, NodeId goal,
                                bool by_success) {
    require_node(view.graph(), start, "start");
    require_node(view.graph(), goal, "goal");
    auto routes = by_success
                      ? dijkstra(view, start, goal,
                                 [&](EdgeIndex e) { return success_key(view, e); })
                      : dijkstra(view, start, goal,
                                 [&](EdgeIndex e) { return distance_key(view, e); });
    if (!routes[goal]) return std::nullopt;
    return make_path(view, std::move(*routes[goal]));
}

}  // namespace

bool Path::contains(NodeId n) const {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
}

Path make_path(const GraphView& view, std::vector<NodeId> nodes) {
    const EnvironmentGraph& g = view.graph();
    if (nodes.empty()) throw Error(ErrorKind::InvalidPath, "path has no nodes");
    for (NodeId n : nodes) {
        if (!g.valid_node(n))
            throw Error(ErrorKind::InvalidPath, "path node " + std::to_string(n) +
                                                    " is not in the graph");
    }
    Path path;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const auto e = g.find_edge(nodes[i], nodes[i + 1]);
        if (!e)
            throw Error(ErrorKind::InvalidPath, "no edge between " + std::to_string(nodes[i]) +
                                                    " and " + std::to_string(nodes[i + 1]));
        path.total_distance += g.edge(*e).distance;
        path.success_probability *= effective_success(view.edge_probs(*e));
    }
    path.nodes = std::move(nodes);
    return path;
}

std::int64_t quantized_distance(double distance) {
    return std::max<std::int64_t>(1, std::llround(distance / kDistanceQuantum));
}

std::int64_t quantized_log_weight(const OutcomeProbs& probs) {
    return std::llround(-std::log(effective_success(probs)) * kLogWeightScale);
}

std::optional<Path> shortest_distance_path(const GraphView& view, NodeId start, NodeId goal) {
    return single_pair(view, start, goal, false);
}

std::optional<Path> max_success_path(const GraphView& view, NodeId start, NodeId goal) {
    return single_pair(view, start, goal, true);
}

PathTable::PathTable(const GraphView& view) : n_(view.graph().node_count()) {
    paths_.resize(n_ * n_);
    for (NodeId s = 0; s < n_; ++s) {
        auto routes = dijkstra(view, s, std::nullopt,
                               [&](EdgeIndex e) { return success_key(view, e); });
        for (NodeId t = 0; t < n_; ++t) {
            if (routes[t]) paths_[s * n_ + t] = make_path(view, std::move(*routes[t]));
        }
    }
}

const std::optional<Path>& PathTable::at(NodeId start, NodeId goal) const {
    if (start >= n_ || goal >= n_)
        throw Error(ErrorKind::InvalidInput, "path table lookup outside the graph");
    return paths_[start * n_ + goal];
}

void MissionSpec::validate(const EnvironmentGraph& graph) const {
    auto check = [&](NodeId n, const std::string& field) {
        if (!graph.valid_node(n))
            throw Error(ErrorKind::InvalidInput,
                        field + ": node " + std::to_string(n) + " is not in the environment");
    };
    if (start) check(*start, "start");
    for (NodeId t : tasks) check(t, "tasks");
    check(end, "end");
    for (NodeId s : safe_locations) check(s, "safe_locations");
    if (std::find(tasks.begin(), tasks.end(), end) != tasks.end())
        throw Error(ErrorKind::InvalidInput, "tasks: end node " + std::to_string(end) +
                                                 " must not also be an un-ordered task");
    auto sorted = tasks;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorKind::InvalidInput, "tasks: duplicate task node");
    if (!(threshold > 0.0) || threshold > 1.0)
        throw Error(ErrorKind::InvalidInput, "threshold must lie in (0, 1]");
    if (hold_limit < 1) throw Error(ErrorKind::InvalidInput, "hold_limit must be at least 1");
}

MissionPlan order_tasks(const GraphView& view, const MissionSpec& spec, NodeId from,
                        OrderingMode mode, const PathTable* table) {
    const EnvironmentGraph& g = view.graph();
    spec.validate(g);
    require_node(g, from, "mission start");

    // Stops: from, each task, end. Legs between every ordered pair are looked
    // up once and reused by every permutation.
    std::vector<NodeId> stops{from};
    std::vector<NodeId> tasks = spec.tasks;
    std::sort(tasks.begin(), tasks.end());
    stops.insert(stops.end(), tasks.begin(), tasks.end());
    stops.push_back(spec.end);
    const std::size_t m = stops.size();
    const std::size_t end_slot = m - 1;

    std::vector<std::optional<Path>> legs(m * m);
    std::vector<Key> keys(m * m, kUnreached);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j || j == 0 || i == end_slot) continue;
            auto leg = table ? table->at(stops[i], stops[j])
                             : max_success_path(view, stops[i], stops[j]);
            if (leg) keys[i * m + j] = leg_key(view, *leg);
            legs[i * m + j] = std::move(leg);
        }
    }
    for (std::size_t j = 1; j < m; ++j) {
        if (!legs[j])
            throw Error(ErrorKind::NoPath, "task " + std::to_string(stops[j]) +
                                               " is unreachable from " + std::to_string(from));
    }

    std::vector<std::size_t> order(tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i + 1;

    const bool exhaustive =
        mode == OrderingMode::Exhaustive ||
        (mode == OrderingMode::Automatic && tasks.size() <= kExhaustiveTaskLimit);

    auto tour_key = [&](const std::vector<std::size_t>& seq) {
        Key total;
        std::size_t prev = 0;
        for (std::size_t s : seq) {
            if (keys[prev * m + s] == kUnreached) return kUnreached;
            total = total + keys[prev * m + s];
            prev = s;
        }
        if (keys[prev * m + end_slot] == kUnreached) return kUnreached;
        return total + keys[prev * m + end_slot];
    };

    std::vector<std::size_t> best;
    if (exhaustive) {
        Key best_key = kUnreached;
        bool found = false;
        // Ascending permutation order, strict improvement only: the first
        // lexicographic order wins among equal keys.
        do {
            const Key k = tour_key(order);
            if (k == kUnreached) continue;
            if (!found || k < best_key) {
                best_key = k;
                best = order;
                found = true;
            }
        } while (std::next_permutation(order.begin(), order.end()));
        if (!found)
            throw Error(ErrorKind::NoPath, "no task order reaches end node " +
                                               std::to_string(spec.end));
    } else {
        std::vector<bool> used(m, false);
        std::size_t current = 0;
        for (std::size_t step = 0; step < tasks.size(); ++step) {
            std::size_t pick = 0;
            for (std::size_t s = 1; s < end_slot; ++s) {
                if (used[s] || keys[current * m + s] == kUnreached) continue;
                if (pick == 0 || keys[current * m + s] < keys[current * m + pick]) pick = s;
            }
            if (pick == 0)
                throw Error(ErrorKind::NoPath, "greedy ordering stranded at node " +
                                                   std::to_string(stops[current]));
            used[pick] = true;
            best.push_back(pick);
            current = pick;
        }
        if (keys[current * m + end_slot] == kUnreached)
            throw Error(ErrorKind::NoPath, "end node " + std::to_string(spec.end) +
                                               " unreachable from last task");
    }

    MissionPlan plan;
    plan.heuristic = !exhaustive;
    std::size_t prev = 0;
    best.push_back(end_slot);
    for (std::size_t s : best) {
        plan.ordered_tasks.push_back(stops[s]);
        const Path& leg = *legs[prev * m + s];
        plan.plan_probability *= leg.success_probability;
        plan.plan_distance += leg.total_distance;
        plan.legs.push_back(leg);
        prev = s;
    }
    return plan;
}

}  // namespace riskpath
