#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskpath/env.hpp"
#include "riskpath/human.hpp"
#include "riskpath/planner.hpp"

namespace riskpath {

struct EpisodeConfig {
    std::shared_ptr<const EnvironmentGraph> environment;
    MissionSpec mission;
    HeatParams heat;
    double uncertainty = 0.0;
    std::uint64_t seed = 0;
    // Guard against livelock; an episode reaching it fails with StepLimit.
    std::uint64_t max_steps = 10000;
    // Consecutive human-caused holds before a redirect request is issued.
    std::uint32_t redirect_after_holds = 2;

    void validate() const;
};

enum class FailureCause { None, HoldTimeout, Catastrophic, StepLimit };

std::string_view to_string(FailureCause cause);

struct EpisodeOutcome {
    bool success = false;
    FailureCause failure_cause = FailureCause::None;
    std::uint64_t steps = 0;
    std::uint64_t redirects = 0;
    NodeId final_robot_node = 0;

    friend bool operator==(const EpisodeOutcome&, const EpisodeOutcome&) = default;
};

/// Optional per-episode overrides of the random initial placement. Used by
/// scenario tests; run_episode draws both positions from the seed otherwise.
struct EpisodeSetup {
    std::optional<NodeId> robot_start;
    std::optional<NodeId> human_start;
};

/// What happened on one tick, recorded when a trace is requested.
struct TickRecord {
    enum class Action { Advance, Retry, Fail, Hold };
    std::uint64_t tick = 0;
    NodeId robot = 0;  // robot position at the start of the tick
    NodeId human = 0;  // human position after its step
    NodeId next = 0;   // node the robot tried or waited to enter
    Action action = Action::Hold;
    std::uint32_t holds = 0;                // consecutive holds after this tick
    std::optional<NodeId> redirect_target;  // set when a redirect was issued
};

/// Runs one mission episode. Deterministic in (cfg, setup). `table` must be
/// built from cfg.environment's unheated view when given. When `trace` is
/// given, one record per tick is appended to it.
EpisodeOutcome run_episode(const EpisodeConfig& cfg, const EpisodeSetup& setup = {},
                           const PathTable* table = nullptr,
                           std::vector<TickRecord>* trace = nullptr);

struct SweepRow {
    double uncertainty = 0.0;
    double success_percent = 0.0;
    std::uint64_t success_count = 0;
    std::uint64_t fail_count = 0;
    std::uint64_t total_redirects = 0;
    double redirect_episode_percent = 0.0;  // episodes with at least one redirect
    std::uint64_t max_redirects_per_episode = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
};

/// Runs `episodes_per_level` episodes per level; episode i of level j uses
/// derive_seed(base.seed, j, i). The report does not depend on `workers`
/// (0 selects the hardware concurrency).
SweepReport run_sweep(const EpisodeConfig& base, std::span<const double> levels,
                      std::size_t episodes_per_level, std::size_t workers);

/// Aggregates one level's outcomes into a report row.
SweepRow summarize_level(double uncertainty, std::span<const EpisodeOutcome> outcomes);

inline constexpr const char* kSummaryHeader =
    "uncertainty,success_pct,success,fail,total_redirects,redirect_pct,max_redirects";

/// CSV rendering of a report: header plus one line per row.
std::string summarize(const SweepReport& report);

/// The default uncertainty grid 0, 0.1, ..., 1.0.
std::vector<double> default_levels();

struct SweepConfig {
    EpisodeConfig base;
    std::vector<double> levels = default_levels();
    std::size_t episodes_per_level = 25000;
    std::size_t workers = 0;
};

}  // namespace riskpath
