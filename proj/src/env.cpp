#include "riskpath/env.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "riskpath/error.hpp"

namespace riskpath {

namespace {

std::string edge_name(const Edge& e) {
    return "(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")";
}

}  // namespace

std::string_view to_string(RiskClass risk) {
    switch (risk) {
        case RiskClass::Low: return "Low";
        case RiskClass::Medium: return "Medium";
        case RiskClass::High: return "High";
        case RiskClass::Severe: return "Severe";
    }
    return "?";
}

std::optional<RiskClass> parse_risk_class(std::string_view name) {
    if (name == "Low") return RiskClass::Low;
    if (name == "Medium") return RiskClass::Medium;
    if (name == "High") return RiskClass::High;
    if (name == "Severe") return RiskClass::Severe;
    return std::nullopt;
}

OutcomeProbs OutcomeProbs::make(double p_success, double p_retry) {
    if (!std::isfinite(p_success) || !std::isfinite(p_retry))
        throw Error(ErrorKind::InvalidInput, "probabilities must be finite");
    if (!(p_success > 0.0) || p_success > 1.0)
        throw Error(ErrorKind::InvalidInput,
                    "p_success must lie in (0, 1], got " + std::to_string(p_success));
    if (p_retry < 0.0 || p_retry > 1.0)
        throw Error(ErrorKind::InvalidInput,
                    "p_retry must lie in [0, 1], got " + std::to_string(p_retry));
    // Allow for decimal round-off in hand-written tables.
    if (p_success + p_retry > 1.0 + 1e-12)
        throw Error(ErrorKind::InvalidInput, "p_success + p_retry exceeds 1");
    return OutcomeProbs(p_success, std::min(p_retry, 1.0 - p_success));
}

double OutcomeProbs::p_fail() const noexcept {
    return std::max(0.0, 1.0 - (success_ + retry_));
}

double effective_success(const OutcomeProbs& probs) {
    const double fail = probs.p_fail();
    if (fail == 0.0) return 1.0;
    return probs.p_success() / (probs.p_success() + fail);
}

const RiskTable& default_risk_table() {
    static const RiskTable table{
        {RiskClass::Low, OutcomeProbs::make(0.999, 0.0009)},
        {RiskClass::Medium, OutcomeProbs::make(0.99, 0.009)},
        {RiskClass::High, OutcomeProbs::make(0.95, 0.045)},
        {RiskClass::Severe, OutcomeProbs::make(0.90, 0.09)},
    };
    return table;
}

EnvironmentGraph::EnvironmentGraph(std::size_t node_count, std::vector<Edge> edges,
                                   RiskTable risk_table, std::vector<NodeInfo> info)
    : node_count_(node_count),
      edges_(std::move(edges)),
      risk_table_(std::move(risk_table)),
      info_(std::move(info)) {
    if (node_count_ == 0)
        throw Error(ErrorKind::InvalidInput, "environment must have at least one node");
    if (!info_.empty() && info_.size() != node_count_)
        throw Error(ErrorKind::InvalidInput, "node info count does not match node count");

    for (auto& e : edges_) {
        if (e.a >= node_count_ || e.b >= node_count_)
            throw Error(ErrorKind::InvalidInput,
                        "dangling node reference in edge " + edge_name(e));
        if (e.a == e.b)
            throw Error(ErrorKind::InvalidInput, "self-loop edge " + edge_name(e));
        if (!std::isfinite(e.distance) || !(e.distance > 0.0))
            throw Error(ErrorKind::InvalidInput,
                        "edge " + edge_name(e) + " must have a positive distance");
        if (!risk_table_.contains(e.risk))
            throw Error(ErrorKind::InvalidInput,
                        "edge " + edge_name(e) + " uses undeclared risk class " +
                            std::string(to_string(e.risk)));
        if (e.a > e.b) std::swap(e.a, e.b);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& l, const Edge& r) {
        return std::pair(l.a, l.b) < std::pair(r.a, r.b);
    });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (edges_[i - 1].a == edges_[i].a && edges_[i - 1].b == edges_[i].b)
            throw Error(ErrorKind::InvalidInput, "duplicate edge " + edge_name(edges_[i]));
    }

    adjacency_.resize(node_count_);
    probs_.reserve(edges_.size());
    for (EdgeIndex i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        adjacency_[e.a].push_back({e.b, i});
        adjacency_[e.b].push_back({e.a, i});
        probs_.push_back(risk_table_.at(e.risk));
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& l, const Neighbor& r) { return l.node < r.node; });
    }
}

std::span<const Neighbor> EnvironmentGraph::neighbors(NodeId n) const {
    if (!valid_node(n))
        throw Error(ErrorKind::InvalidInput, "invalid node id " + std::to_string(n));
    return adjacency_[n];
}

std::optional<EdgeIndex> EnvironmentGraph::find_edge(NodeId a, NodeId b) const {
    if (!valid_node(a) || !valid_node(b)) return std::nullopt;
    for (const Neighbor& nb : adjacency_[a]) {
        if (nb.node == b) return nb.edge;
    }
    return std::nullopt;
}

}  // namespace riskpath
