#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace riskpath {

using NodeId = std::uint32_t;
using EdgeIndex = std::uint32_t;

// Map colours: green, yellow, red, black.
enum class RiskClass : std::uint8_t { Low, Medium, High, Severe };

std::string_view to_string(RiskClass risk);
std::optional<RiskClass> parse_risk_class(std::string_view name);

/// Outcome distribution of one traversal attempt along an edge.
///
/// Only p_success and p_retry are stored; p_fail is always derived as
/// 1 - (p_success + p_retry), so the three values sum to one by construction.
class OutcomeProbs {
public:
    /// Throws Error(InvalidInput) unless 0 < p_success, 0 <= p_retry and
    /// p_success + p_retry <= 1.
    static OutcomeProbs make(double p_success, double p_retry);

    double p_success() const noexcept { return success_; }
    double p_retry() const noexcept { return retry_; }
    double p_fail() const noexcept;

    friend bool operator==(const OutcomeProbs&, const OutcomeProbs&) = default;

private:
    OutcomeProbs(double success, double retry) : success_(success), retry_(retry) {}

    double success_;
    double retry_;
};

/// Probability that an unbounded retry loop on one edge ends in success rather
/// than catastrophic failure: p_success / (p_success + p_fail).
double effective_success(const OutcomeProbs& probs);

using RiskTable = std::map<RiskClass, OutcomeProbs>;

/// Tool defaults for the four risk classes. Environment files may override them.
const RiskTable& default_risk_table();

struct Edge {
    NodeId a = 0;
    NodeId b = 0;
    double distance = 0.0;
    RiskClass risk = RiskClass::Low;

    NodeId other(NodeId n) const noexcept { return n == a ? b : a; }
    bool touches(NodeId n) const noexcept { return n == a || n == b; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    NodeId node;
    EdgeIndex edge;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NodeInfo {
    std::string label;
    std::optional<std::array<double, 2>> xy;  // decorative only

    friend bool operator==(const NodeInfo&, const NodeInfo&) = default;
};

class EnvironmentGraph;

/// Non-owning view pairing a topology with one probability per edge. Both the
/// plain environment and a heated environment expose one; all planning and
/// verification code works against this view.
struct GraphView {
    const EnvironmentGraph* topology = nullptr;
    std::span<const OutcomeProbs> probs;

    const EnvironmentGraph& graph() const noexcept { return *topology; }
    const OutcomeProbs& edge_probs(EdgeIndex e) const { return probs[e]; }
};

/// Undirected graph of locations with risk-classed edges. Immutable once built.
class EnvironmentGraph {
public:
    /// Validates every invariant; edges are normalised to a < b and stored
    /// sorted by (a, b). `info` is either empty or has one entry per node.
    EnvironmentGraph(std::size_t node_count, std::vector<Edge> edges,
                     RiskTable risk_table, std::vector<NodeInfo> info = {});

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool valid_node(NodeId n) const noexcept { return n < node_count_; }

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
    const RiskTable& risk_table() const noexcept { return risk_table_; }
    const std::vector<NodeInfo>& node_info() const noexcept { return info_; }

    /// Incident edges sorted by neighbour id. Throws on an invalid node.
    std::span<const Neighbor> neighbors(NodeId n) const;
    std::optional<EdgeIndex> find_edge(NodeId a, NodeId b) const;

    const OutcomeProbs& edge_probs(EdgeIndex e) const { return probs_.at(e); }
    GraphView view() const noexcept { return GraphView{this, probs_}; }

    friend bool operator==(const EnvironmentGraph& l, const EnvironmentGraph& r) {
        return l.node_count_ == r.node_count_ && l.edges_ == r.edges_ &&
               l.risk_table_ == r.risk_table_ && l.info_ == r.info_;
    }

private:
    std::size_t node_count_;
    std::vector<Edge> edges_;
    RiskTable risk_table_;
    std::vector<NodeInfo> info_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<OutcomeProbs> probs_;
};

}  // namespace riskpath
