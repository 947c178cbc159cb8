#include "riskpath/verify.hpp"

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <sstream>

#include "riskpath/error.hpp"

namespace riskpath {

namespace {

std::string format_probability(double p) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, res.ptr);
}

std::string sanitize_comment(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

}  // namespace

FixedPolicyChain::FixedPolicyChain(std::vector<NodeId> path, std::vector<OutcomeProbs> steps)
    : path_(std::move(path)), steps_(std::move(steps)) {
    if (path_.empty() || steps_.size() + 1 != path_.size())
        throw Error(ErrorKind::InvalidInput, "chain needs one step per path edge");
}

FixedPolicyChain build_chain(const GraphView& view, const Path& path) {
    if (path.nodes.empty()) throw Error(ErrorKind::InvalidPath, "path has no nodes");
    std::vector<OutcomeProbs> steps;
    steps.reserve(path.edge_count());
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const auto e = view.graph().find_edge(path.nodes[i], path.nodes[i + 1]);
        if (!e)
            throw Error(ErrorKind::InvalidPath,
                        "path edge " + std::to_string(path.nodes[i]) + "-" +
                            std::to_string(path.nodes[i + 1]) + " is missing from the graph");
        steps.push_back(view.edge_probs(*e));
    }
    return FixedPolicyChain(path.nodes, std::move(steps));
}

double closed_form_probability(const FixedPolicyChain& chain) {
    double p = 1.0;
    for (const OutcomeProbs& step : chain.steps()) p *= effective_success(step);
    return p;
}

double absorption_probability(const FixedPolicyChain& chain) {
    const auto k = static_cast<Eigen::Index>(chain.transient_count());
    if (k == 0) return 1.0;
    // Row i of (I - Q): the stay loop leaves 1 - p_retry = p_success + p_fail
    // on the diagonal, and advancing to i + 1 contributes -p_success.
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd into_done = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const OutcomeProbs& step = chain.steps()[static_cast<std::size_t>(i)];
        system(i, i) = step.p_success() + step.p_fail();
        if (i + 1 < k)
            system(i, i + 1) = -step.p_success();
        else
            into_done(i) = step.p_success();
    }
    const Eigen::VectorXd x = system.partialPivLu().solve(into_done);
    return x(0);
}

double evaluate_chain(const FixedPolicyChain& chain) {
    const double closed = closed_form_probability(chain);
    const double solved = absorption_probability(chain);
    if (!(std::abs(closed - solved) <= 1e-12))
        throw Error(ErrorKind::Internal, "chain evaluation mismatch: closed form " +
                                             format_probability(closed) + " vs linear solve " +
                                             format_probability(solved));
    return closed;
}

double simulate_chain(const FixedPolicyChain& chain, std::size_t trials, Rng& rng) {
    if (trials == 0) return 0.0;
    std::size_t arrived = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t state = chain.initial_state();
        while (state < chain.done_state()) {
            const OutcomeProbs& step = chain.steps()[state];
            const double u = rng.uniform();
            if (u < step.p_success())
                ++state;
            else if (u >= step.p_success() + step.p_retry())
                break;
        }
        if (state == chain.done_state()) ++arrived;
    }
    return static_cast<double>(arrived) / static_cast<double>(trials);
}

PrismModel export_prism(const FixedPolicyChain& chain, std::string_view path_label) {
    const std::size_t done = chain.done_state();
    const std::size_t dead = chain.dead_state();
    std::ostringstream nm;
    nm << "// Fixed-policy model for path " << sanitize_comment(path_label) << "\n";
    nm << "// nodes:";
    for (std::size_t i = 0; i < chain.path().size(); ++i)
        nm << (i == 0 ? " " : " -> ") << chain.path()[i];
    nm << "\n";
    nm << "mdp\n\n";
    nm << "const int final = " << done << ";\n\n";
    nm << "module robot\n";
    nm << "\tstate : [0.." << dead << "] init " << chain.initial_state() << ";\n\n";
    for (std::size_t i = 0; i < chain.transient_count(); ++i) {
        const OutcomeProbs& step = chain.steps()[i];
        nm << "\t// " << chain.path()[i] << " -> " << chain.path()[i + 1] << "\n";
        nm << "\t[step" << i << "] state=" << i << " -> ";
        nm << format_probability(step.p_success()) << ":(state'=" << i + 1 << ")";
        if (step.p_retry() > 0.0)
            nm << " + " << format_probability(step.p_retry()) << ":(state'=" << i << ")";
        if (step.p_fail() > 0.0)
            nm << " + " << format_probability(step.p_fail()) << ":(state'=" << dead << ")";
        nm << ";\n";
    }
    nm << "\t[done] state=" << done << " -> (state'=" << done << ");\n";
    nm << "\t[dead] state=" << dead << " -> (state'=" << dead << ");\n";
    nm << "endmodule\n\n";
    nm << "label \"end\" = state=final;\n";
    nm << "label \"dead\" = state=" << dead << ";\n";

    return PrismModel{nm.str(), "Pmax=? [ F (\"end\" & state=final) ]\n"};
}

const Path& select_path(const Path& dist, const Path& prob, double r_dist, double r_prob) {
    return r_dist > r_prob ? dist : prob;
}

std::optional<ValidatedPlan> validate_paths(const EnvironmentGraph& graph, NodeId start,
                                            NodeId final, const HeatedGraph* heated) {
    if (heated && !(&heated->base() == &graph || heated->base() == graph))
        throw Error(ErrorKind::InvalidInput, "heated graph was derived from another environment");
    const GraphView view = heated ? heated->view() : graph.view();

    auto dist = shortest_distance_path(view, start, final);
    auto prob = max_success_path(view, start, final);
    if (!dist || !prob) return std::nullopt;

    ValidatedPlan plan;
    plan.r_dist = evaluate_chain(build_chain(view, *dist));
    plan.r_prob =
        prob->nodes == dist->nodes ? plan.r_dist : evaluate_chain(build_chain(view, *prob));
    plan.chose_distance = &select_path(*dist, *prob, plan.r_dist, plan.r_prob) == &*dist;
    plan.distance_path = std::move(*dist);
    plan.probability_path = std::move(*prob);
    return plan;
}

std::optional<Path> plan_validated_path(const EnvironmentGraph& graph, NodeId start,
                                        NodeId final, const HeatedGraph* heated) {
    auto plan = validate_paths(graph, start, final, heated);
    if (!plan) return std::nullopt;
    return plan->selected();
}

}  // namespace riskpath
