#include "riskpath/sim.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <mutex>
#include <thread>

#include "riskpath/error.hpp"
#include "riskpath/verify.hpp"

namespace riskpath {

namespace {

// Human without an outstanding redirect: predicted to stay where it is.
void settle_idle(const EnvironmentGraph& g, HumanState& human, bool& redirected) {
    if (redirected && human.goal && human.position == *human.goal) redirected = false;
    if (!redirected) {
        human.goal = human.position;
        human.predicted_path = make_path(g.view(), {human.position});
    }
}

// Nearest safe location (by walking distance from the human) that is not on
// the robot's remaining route and is not where the human already stands.
std::optional<NodeId> redirect_target(const EnvironmentGraph& g, const MissionSpec& mission,
                                      const HumanState& human,
                                      const std::vector<NodeId>& robot_route) {
    std::optional<NodeId> best;
    std::int64_t best_distance = 0;
    for (NodeId safe : mission.safe_locations) {
        if (safe == human.position) continue;
        if (std::find(robot_route.begin(), robot_route.end(), safe) != robot_route.end()) continue;
        const auto path = shortest_distance_path(g.view(), human.position, safe);
        if (!path) continue;
        const std::int64_t d = quantized_distance(path->total_distance);
        if (!best || d < best_distance || (d == best_distance && safe < *best)) {
            best = safe;
            best_distance = d;
        }
    }
    return best;
}

class Mission {
public:
    Mission(const MissionPlan& plan, const MissionSpec& spec)
        : order_(plan.ordered_tasks), pending_(spec.tasks), end_(spec.end) {}

    // Marks `node` visited; returns true once every task is done and the
    // robot stands on the end node.
    bool visit(NodeId node) {
        std::erase(pending_, node);
        while (cursor_ + 1 < order_.size() &&
               std::find(pending_.begin(), pending_.end(), order_[cursor_]) == pending_.end())
            ++cursor_;
        return pending_.empty() && node == end_;
    }

    NodeId objective() const { return order_[cursor_]; }

    std::vector<NodeId> remaining() const {
        std::vector<NodeId> out(pending_);
        out.push_back(end_);
        return out;
    }

private:
    std::vector<NodeId> order_;
    std::vector<NodeId> pending_;
    NodeId end_;
    std::size_t cursor_ = 0;
};

std::string format_fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(FailureCause cause) {
    switch (cause) {
        case FailureCause::None: return "none";
        case FailureCause::HoldTimeout: return "hold_timeout";
        case FailureCause::Catastrophic: return "catastrophic";
        case FailureCause::StepLimit: return "step_limit";
    }
    return "?";
}

void EpisodeConfig::validate() const {
    if (!environment) throw Error(ErrorKind::InvalidInput, "episode has no environment");
    mission.validate(*environment);
    if (!(uncertainty >= 0.0 && uncertainty <= 1.0))
        throw Error(ErrorKind::InvalidInput, "uncertainty must lie in [0, 1]");
    if (!(heat.path_heat >= 0.0 && heat.path_heat < 1.0))
        throw Error(ErrorKind::InvalidInput, "heat.path_heat must lie in [0, 1)");
    if (!(heat.neighbor_heat >= 0.0 && heat.neighbor_heat < 1.0))
        throw Error(ErrorKind::InvalidInput, "heat.neighbor_heat must lie in [0, 1)");
    if (max_steps == 0) throw Error(ErrorKind::InvalidInput, "max_steps must be positive");
    if (redirect_after_holds == 0)
        throw Error(ErrorKind::InvalidInput, "redirect_after_holds must be at least 1");
}

EpisodeOutcome run_episode(const EpisodeConfig& cfg, const EpisodeSetup& setup,
                           const PathTable* table, std::vector<TickRecord>* trace) {
    cfg.validate();
    const EnvironmentGraph& g = *cfg.environment;
    const MissionSpec& spec = cfg.mission;
    Rng rng(cfg.seed);

    // Both draws always happen so overrides do not shift the stream.
    NodeId robot = static_cast<NodeId>(rng.below(g.node_count()));
    const NodeId human_start = static_cast<NodeId>(rng.below(g.node_count()));
    if (spec.start) robot = *spec.start;
    if (setup.robot_start) robot = *setup.robot_start;

    HumanState human;
    human.position = setup.human_start.value_or(human_start);
    human.uncertainty = cfg.uncertainty;
    if (!g.valid_node(robot) || !g.valid_node(human.position))
        throw Error(ErrorKind::InvalidInput, "episode start node outside the environment");
    bool redirected = false;
    settle_idle(g, human, redirected);

    Mission mission(order_tasks(g.view(), spec, robot, OrderingMode::Automatic, table), spec);

    EpisodeOutcome out;
    out.final_robot_node = robot;
    if (mission.visit(robot)) {
        out.success = true;
        return out;
    }

    std::uint32_t holds = 0;
    bool redirect_issued_this_hold = false;
    for (std::uint64_t tick = 1; tick <= cfg.max_steps; ++tick) {
        out.steps = tick;

        human = step_human(g, human, rng);
        settle_idle(g, human, redirected);

        const HeatMap heat = build_heat_map(g, human, cfg.heat);
        const HeatedGraph heated = apply_heat(g, heat);
        const auto route = plan_validated_path(g, robot, mission.objective(), &heated);
        if (!route || route->nodes.size() < 2)
            throw Error(ErrorKind::Internal, "robot lost its route to the next objective");

        const NodeId next = route->nodes[1];
        const EdgeIndex edge = *g.find_edge(robot, next);
        const OutcomeProbs& probs = heated.edge_probs(edge);
        TickRecord rec;
        rec.tick = tick;
        rec.robot = robot;
        rec.human = human.position;
        rec.next = next;
        auto log = [&](TickRecord::Action action) {
            if (!trace) return;
            rec.action = action;
            rec.holds = holds;
            trace->push_back(rec);
        };

        if (effective_success(probs) < spec.threshold) {
            ++holds;
            if (!redirect_issued_this_hold && holds >= cfg.redirect_after_holds &&
                heat.at(edge) > 0.0) {
                auto blocked = route->nodes;
                const auto rest = mission.remaining();
                blocked.insert(blocked.end(), rest.begin(), rest.end());
                const auto target = redirect_target(g, spec, human, blocked);
                // A human already heading to a safe place off the route is left alone.
                const bool outstanding =
                    redirected &&
                    std::find(blocked.begin(), blocked.end(), *human.goal) == blocked.end();
                if (target && !outstanding) {
                    human.goal = *target;
                    human.predicted_path = predict_human_path(g, human);
                    redirected = true;
                    redirect_issued_this_hold = true;
                    ++out.redirects;
                    rec.redirect_target = *target;
                }
            }
            log(TickRecord::Action::Hold);
            if (holds >= spec.hold_limit) {
                out.failure_cause = FailureCause::HoldTimeout;
                return out;
            }
            continue;
        }

        holds = 0;
        redirect_issued_this_hold = false;
        const double u = rng.uniform();
        if (u < probs.p_success()) {
            log(TickRecord::Action::Advance);
            robot = next;
            out.final_robot_node = robot;
            if (mission.visit(robot)) {
                out.success = true;
                return out;
            }
        } else if (u >= probs.p_success() + probs.p_retry()) {
            log(TickRecord::Action::Fail);
            out.failure_cause = FailureCause::Catastrophic;
            return out;
        } else {
            log(TickRecord::Action::Retry);
        }
    }
    out.failure_cause = FailureCause::StepLimit;
    return out;
}

SweepRow summarize_level(double uncertainty, std::span<const EpisodeOutcome> outcomes) {
    SweepRow row;
    row.uncertainty = uncertainty;
    std::uint64_t with_redirect = 0;
    for (const EpisodeOutcome& o : outcomes) {
        (o.success ? row.success_count : row.fail_count) += 1;
        row.total_redirects += o.redirects;
        if (o.redirects > 0) ++with_redirect;
        row.max_redirects_per_episode = std::max(row.max_redirects_per_episode, o.redirects);
    }
    if (!outcomes.empty()) {
        const double n = static_cast<double>(outcomes.size());
        row.success_percent = 100.0 * static_cast<double>(row.success_count) / n;
        row.redirect_episode_percent = 100.0 * static_cast<double>(with_redirect) / n;
    }
    return row;
}

SweepReport run_sweep(const EpisodeConfig& base, std::span<const double> levels,
                      std::size_t episodes_per_level, std::size_t workers) {
    base.validate();
    for (double level : levels) {
        if (!(level >= 0.0 && level <= 1.0))
            throw Error(ErrorKind::InvalidInput, "sweep levels must lie in [0, 1]");
    }
    if (episodes_per_level == 0)
        throw Error(ErrorKind::InvalidInput, "episodes_per_level must be at least 1");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

    const PathTable table(base.environment->view());
    const std::size_t total = levels.size() * episodes_per_level;
    std::vector<EpisodeOutcome> outcomes(total);

    // Outcomes land in their seed-indexed slot, so scheduling cannot change
    // the aggregate.
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t job = next++; job < total; job = next++) {
            const std::size_t level = job / episodes_per_level;
            const std::size_t index = job % episodes_per_level;
            EpisodeConfig cfg = base;
            cfg.uncertainty = levels[level];
            cfg.seed = derive_seed(base.seed, level, index);
            try {
                outcomes[job] = run_episode(cfg, {}, &table);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next = total;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < std::min(workers, total); ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    SweepReport report;
    for (std::size_t level = 0; level < levels.size(); ++level) {
        report.rows.push_back(summarize_level(
            levels[level],
            std::span(outcomes).subspan(level * episodes_per_level, episodes_per_level)));
    }
    return report;
}

std::string summarize(const SweepReport& report) {
    std::string csv = kSummaryHeader;
    csv += '\n';
    for (const SweepRow& r : report.rows) {
        csv += format_shortest(r.uncertainty) + ',' + format_fixed2(r.success_percent) + ',' +
               std::to_string(r.success_count) + ',' + std::to_string(r.fail_count) + ',' +
               std::to_string(r.total_redirects) + ',' + format_fixed2(r.redirect_episode_percent) +
               ',' + std::to_string(r.max_redirects_per_episode) + '\n';
    }
    return csv;
}

std::vector<double> default_levels() {
    std::vector<double> levels;
    for (int i = 0; i <= 10; ++i) levels.push_back(i / 10.0);
    return levels;
}

}  // namespace riskpath
