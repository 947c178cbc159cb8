#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskpath/env.hpp"
#include "riskpath/human.hpp"
#include "riskpath/planner.hpp"
#include "riskpath/rng.hpp"

namespace riskpath {

/// Markov chain induced by committing the robot to one path.
///
/// States 0..k-1 are the transient path positions (state i attempts the edge
/// path[i] -> path[i+1]); state k is `done` and state k+1 is `dead`. A
/// single-node path has no transient states and starts in `done`.
class FixedPolicyChain {
public:
    FixedPolicyChain(std::vector<NodeId> path, std::vector<OutcomeProbs> steps);

    const std::vector<NodeId>& path() const noexcept { return path_; }
    const std::vector<OutcomeProbs>& steps() const noexcept { return steps_; }

    std::size_t transient_count() const noexcept { return steps_.size(); }
    std::size_t state_count() const noexcept { return steps_.size() + 2; }
    std::size_t done_state() const noexcept { return steps_.size(); }
    std::size_t dead_state() const noexcept { return steps_.size() + 1; }
    std::size_t initial_state() const noexcept { return 0; }

private:
    std::vector<NodeId> path_;
    std::vector<OutcomeProbs> steps_;
};

/// Throws Error(InvalidPath) if a path edge is missing from the view.
FixedPolicyChain build_chain(const GraphView& view, const Path& path);

/// Product of effective_success over the chain's steps.
double closed_form_probability(const FixedPolicyChain& chain);

/// Absorption probability into `done`, from a dense linear solve of
/// (I - Q) x = r over the transient states.
double absorption_probability(const FixedPolicyChain& chain);

/// Probability of eventually reaching `done`. Computes both routes above and
/// throws Error(Internal) if they disagree by more than 1e-12.
double evaluate_chain(const FixedPolicyChain& chain);

/// Fraction of `trials` sampled runs that are absorbed in `done`.
double simulate_chain(const FixedPolicyChain& chain, std::size_t trials, Rng& rng);

struct PrismModel {
    std::string model;       // .nm
    std::string properties;  // .props
};

/// PRISM-language rendering of the chain as a nondeterminism-free MDP, plus
/// the reachability property. Output is byte-stable for identical inputs.
PrismModel export_prism(const FixedPolicyChain& chain, std::string_view path_label);

/// Returns `dist` iff r_dist > r_prob; ties go to `prob`.
const Path& select_path(const Path& dist, const Path& prob, double r_dist, double r_prob);

/// Both candidate paths, their validated probabilities and the winner.
struct ValidatedPlan {
    Path distance_path;
    Path probability_path;
    double r_dist = 1.0;
    double r_prob = 1.0;
    bool chose_distance = false;

    const Path& selected() const { return chose_distance ? distance_path : probability_path; }
};

/// Finds, validates and selects between the distance and probability paths.
/// When `heated` is given, everything runs on the heated environment.
/// Returns nullopt when `final` is unreachable.
std::optional<ValidatedPlan> validate_paths(const EnvironmentGraph& graph, NodeId start,
                                            NodeId final, const HeatedGraph* heated = nullptr);

std::optional<Path> plan_validated_path(const EnvironmentGraph& graph, NodeId start,
                                        NodeId final, const HeatedGraph* heated = nullptr);

}  // namespace riskpath
