#include "riskpath/riskpath.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "riskpath/error.hpp"
#include "riskpath/io.hpp"
#include "riskpath/sim.hpp"
#include "riskpath/verify.hpp"

using namespace riskpath;

struct rp_environment {
    std::shared_ptr<const EnvironmentGraph> graph;
};

struct rp_mission {
    MissionSpec spec;
};

struct rp_plan {
    ValidatedPlan plan;
};

struct rp_sweep_config {
    SweepConfig config;
};

struct rp_sweep_report {
    SweepReport report;
};

namespace {

thread_local std::string last_error;

rp_status status_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return RP_ERR_INVALID_INPUT;
        case ErrorKind::Io: return RP_ERR_IO;
        case ErrorKind::NoPath: return RP_ERR_NO_PATH;
        case ErrorKind::InvalidPath: return RP_ERR_INVALID_PATH;
        case ErrorKind::Internal: return RP_ERR_INTERNAL;
    }
    return RP_ERR_INTERNAL;
}

rp_status fail(rp_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

rp_status succeed() {
    last_error.clear();
    return RP_OK;
}

template <class F>
rp_status guarded(F&& body) {
    try {
        body();
        return succeed();
    } catch (const Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(RP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RP_ERR_INTERNAL, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

HeatParams heat_or_default(const rp_heat_params* heat) {
    if (!heat) return HeatParams{};
    return HeatParams{heat->path_heat, heat->neighbor_heat, heat->neighbor_reach};
}

// A human without a goal is predicted to stay where it is.
HumanState human_state(const EnvironmentGraph& g, const rp_human& h) {
    if (!g.valid_node(h.position))
        throw Error(ErrorKind::InvalidInput,
                    "human position " + std::to_string(h.position) + " is not in the graph");
    if (!(h.uncertainty >= 0.0 && h.uncertainty <= 1.0))
        throw Error(ErrorKind::InvalidInput, "human uncertainty must lie in [0, 1]");
    HumanState state;
    state.position = h.position;
    state.uncertainty = h.uncertainty;
    state.goal = h.has_goal ? h.goal : h.position;
    if (!g.valid_node(*state.goal))
        throw Error(ErrorKind::InvalidInput,
                    "human goal " + std::to_string(*state.goal) + " is not in the graph");
    state.predicted_path = predict_human_path(g, state);
    return state;
}

std::vector<NodeId> node_vector(const uint32_t* nodes, size_t count) {
    if (count > 0 && !nodes) throw Error(ErrorKind::InvalidInput, "path nodes are null");
    return std::vector<NodeId>(nodes, nodes + count);
}

const Path& pick(const rp_plan* plan, rp_path_kind kind) {
    switch (kind) {
        case RP_PATH_DISTANCE: return plan->plan.distance_path;
        case RP_PATH_PROBABILITY: return plan->plan.probability_path;
        default: return plan->plan.selected();
    }
}

}  // namespace

#define RP_REQUIRE(cond) \
    if (!(cond)) return fail(RP_ERR_INVALID_ARGUMENT, "null argument: " #cond)

extern "C" {

const char* rp_last_error(void) { return last_error.c_str(); }

const char* rp_status_name(rp_status status) {
    switch (status) {
        case RP_OK: return "ok";
        case RP_ERR_INVALID_ARGUMENT: return "invalid argument";
        case RP_ERR_INVALID_INPUT: return "invalid input";
        case RP_ERR_IO: return "i/o error";
        case RP_ERR_NO_PATH: return "no path";
        case RP_ERR_INVALID_PATH: return "invalid path";
        case RP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rp_failure_cause_name(rp_failure_cause cause) {
    switch (cause) {
        case RP_FAILURE_NONE: return "none";
        case RP_FAILURE_HOLD_TIMEOUT: return "hold_timeout";
        case RP_FAILURE_CATASTROPHIC: return "catastrophic";
        case RP_FAILURE_STEP_LIMIT: return "step_limit";
    }
    return "unknown";
}

void rp_string_free(char* s) { delete[] s; }

rp_heat_params rp_default_heat_params(void) {
    const HeatParams d;
    return rp_heat_params{d.path_heat, d.neighbor_heat, d.neighbor_reach};
}

uint64_t rp_derive_seed(uint64_t base, uint64_t level, uint64_t index) {
    return derive_seed(base, level, index);
}

rp_status rp_environment_load(const char* path, rp_environment** out) {
    RP_REQUIRE(path && out);
    return guarded([&] {
        auto g = std::make_shared<const EnvironmentGraph>(load_environment_file(path));
        *out = new rp_environment{std::move(g)};
    });
}

rp_status rp_environment_parse(const char* json, rp_environment** out) {
    RP_REQUIRE(json && out);
    return guarded([&] {
        auto g = std::make_shared<const EnvironmentGraph>(parse_environment(json));
        *out = new rp_environment{std::move(g)};
    });
}

rp_status rp_environment_default(rp_environment** out) {
    RP_REQUIRE(out);
    return guarded([&] { *out = new rp_environment{default_environment()}; });
}

rp_status rp_environment_to_json(const rp_environment* env, char** out) {
    RP_REQUIRE(env && out);
    return guarded([&] { *out = copy_string(save_environment(*env->graph)); });
}

size_t rp_environment_node_count(const rp_environment* env) {
    return env ? env->graph->node_count() : 0;
}

size_t rp_environment_edge_count(const rp_environment* env) {
    return env ? env->graph->edge_count() : 0;
}

void rp_environment_free(rp_environment* env) { delete env; }

rp_status rp_plan_route(const rp_environment* env, uint32_t start, uint32_t goal,
                        const rp_human* human, const rp_heat_params* heat, rp_plan** out) {
    RP_REQUIRE(env && out);
    return guarded([&] {
        const EnvironmentGraph& g = *env->graph;
        for (NodeId n : {start, goal}) {
            if (!g.valid_node(n))
                throw Error(ErrorKind::InvalidInput,
                            "node " + std::to_string(n) + " is not in the graph");
        }
        std::optional<HeatedGraph> heated;
        if (human) {
            const HumanState state = human_state(g, *human);
            heated.emplace(apply_heat(g, build_heat_map(g, state, heat_or_default(heat))));
        }
        auto plan = validate_paths(g, start, goal, heated ? &*heated : nullptr);
        if (!plan)
            throw Error(ErrorKind::NoPath, "node " + std::to_string(goal) +
                                               " is unreachable from " + std::to_string(start));
        *out = new rp_plan{std::move(*plan)};
    });
}

size_t rp_plan_nodes(const rp_plan* plan, rp_path_kind kind, const uint32_t** nodes) {
    if (!plan) return 0;
    const Path& p = pick(plan, kind);
    if (nodes) *nodes = p.nodes.data();
    return p.nodes.size();
}

double rp_plan_probability(const rp_plan* plan, rp_path_kind kind) {
    if (!plan) return 0.0;
    switch (kind) {
        case RP_PATH_DISTANCE: return plan->plan.r_dist;
        case RP_PATH_PROBABILITY: return plan->plan.r_prob;
        default: return plan->plan.chose_distance ? plan->plan.r_dist : plan->plan.r_prob;
    }
}

double rp_plan_distance(const rp_plan* plan, rp_path_kind kind) {
    return plan ? pick(plan, kind).total_distance : 0.0;
}

int rp_plan_chose_distance(const rp_plan* plan) { return plan && plan->plan.chose_distance; }

void rp_plan_free(rp_plan* plan) { delete plan; }

rp_status rp_path_probability(const rp_environment* env, const uint32_t* nodes, size_t count,
                              const rp_human* human, const rp_heat_params* heat,
                              double* out) {
    RP_REQUIRE(env && out);
    return guarded([&] {
        const EnvironmentGraph& g = *env->graph;
        const auto seq = node_vector(nodes, count);
        if (human) {
            const HeatedGraph heated =
                apply_heat(g, build_heat_map(g, human_state(g, *human), heat_or_default(heat)));
            *out = evaluate_chain(build_chain(heated.view(), make_path(heated.view(), seq)));
        } else {
            *out = evaluate_chain(build_chain(g.view(), make_path(g.view(), seq)));
        }
    });
}

rp_status rp_path_simulate(const rp_environment* env, const uint32_t* nodes, size_t count,
                           uint64_t trials, uint64_t seed, double* out) {
    RP_REQUIRE(env && out);
    return guarded([&] {
        if (trials == 0) throw Error(ErrorKind::InvalidInput, "trials must be positive");
        const EnvironmentGraph& g = *env->graph;
        Rng rng(seed);
        *out = simulate_chain(build_chain(g.view(), make_path(g.view(), node_vector(nodes, count))),
                              trials, rng);
    });
}

rp_status rp_export_prism(const rp_environment* env, const uint32_t* nodes, size_t count,
                          const char* label, char** model, char** properties) {
    RP_REQUIRE(env && model && properties);
    return guarded([&] {
        const EnvironmentGraph& g = *env->graph;
        const auto chain = build_chain(g.view(), make_path(g.view(), node_vector(nodes, count)));
        const PrismModel prism = export_prism(chain, label ? label : "");
        std::unique_ptr<char[]> m(copy_string(prism.model));
        *properties = copy_string(prism.properties);
        *model = m.release();
    });
}

rp_status rp_mission_load(const rp_environment* env, const char* path, rp_mission** out) {
    RP_REQUIRE(env && path && out);
    return guarded([&] { *out = new rp_mission{load_mission_file(path, *env->graph)}; });
}

rp_status rp_mission_parse(const rp_environment* env, const char* json, rp_mission** out) {
    RP_REQUIRE(env && json && out);
    return guarded([&] { *out = new rp_mission{parse_mission(json, *env->graph)}; });
}

rp_status rp_mission_case_study(rp_mission** out) {
    RP_REQUIRE(out);
    return guarded([&] { *out = new rp_mission{case_study_mission()}; });
}

void rp_mission_free(rp_mission* mission) { delete mission; }

rp_status rp_run_episode(const rp_environment* env, const rp_mission* mission,
                         const rp_heat_params* heat, double uncertainty, uint64_t seed,
                         rp_episode_outcome* out) {
    RP_REQUIRE(env && mission && out);
    return guarded([&] {
        EpisodeConfig cfg;
        cfg.environment = env->graph;
        cfg.mission = mission->spec;
        cfg.heat = heat_or_default(heat);
        cfg.uncertainty = uncertainty;
        cfg.seed = seed;
        const EpisodeOutcome o = run_episode(cfg);
        out->success = o.success ? 1 : 0;
        out->failure_cause = static_cast<rp_failure_cause>(o.failure_cause);
        out->steps = o.steps;
        out->redirects = o.redirects;
        out->final_robot_node = o.final_robot_node;
    });
}

rp_status rp_sweep_config_load(const char* path, rp_sweep_config** out) {
    RP_REQUIRE(path && out);
    return guarded([&] { *out = new rp_sweep_config{load_sweep_config_file(path)}; });
}

rp_status rp_sweep_config_create(const rp_environment* env, const rp_mission* mission,
                                 rp_sweep_config** out) {
    RP_REQUIRE(env && mission && out);
    return guarded([&] {
        SweepConfig cfg;
        cfg.base.environment = env->graph;
        cfg.base.mission = mission->spec;
        *out = new rp_sweep_config{std::move(cfg)};
    });
}

rp_status rp_sweep_config_set_seed(rp_sweep_config* cfg, uint64_t seed) {
    RP_REQUIRE(cfg);
    cfg->config.base.seed = seed;
    return succeed();
}

rp_status rp_sweep_config_set_episodes(rp_sweep_config* cfg, uint64_t episodes) {
    RP_REQUIRE(cfg);
    if (episodes == 0) return fail(RP_ERR_INVALID_INPUT, "episodes must be positive");
    cfg->config.episodes_per_level = episodes;
    return succeed();
}

rp_status rp_sweep_config_set_workers(rp_sweep_config* cfg, uint64_t workers) {
    RP_REQUIRE(cfg);
    cfg->config.workers = workers;
    return succeed();
}

rp_status rp_sweep_config_set_levels(rp_sweep_config* cfg, const double* levels, size_t count) {
    RP_REQUIRE(cfg && (levels || count == 0));
    if (count == 0) return fail(RP_ERR_INVALID_INPUT, "at least one level is required");
    for (size_t i = 0; i < count; ++i) {
        if (!(levels[i] >= 0.0 && levels[i] <= 1.0))
            return fail(RP_ERR_INVALID_INPUT, "levels must lie in [0, 1]");
    }
    cfg->config.levels.assign(levels, levels + count);
    return succeed();
}

void rp_sweep_config_free(rp_sweep_config* cfg) { delete cfg; }

rp_status rp_run_sweep(const rp_sweep_config* cfg, rp_sweep_report** out) {
    RP_REQUIRE(cfg && out);
    return guarded([&] {
        const SweepConfig& c = cfg->config;
        *out = new rp_sweep_report{
            run_sweep(c.base, c.levels, c.episodes_per_level, c.workers)};
    });
}

size_t rp_sweep_report_row_count(const rp_sweep_report* report) {
    return report ? report->report.rows.size() : 0;
}

rp_status rp_sweep_report_row(const rp_sweep_report* report, size_t index, rp_sweep_row* out) {
    RP_REQUIRE(report && out);
    if (index >= report->report.rows.size())
        return fail(RP_ERR_INVALID_INPUT, "row index out of range");
    const SweepRow& r = report->report.rows[index];
    *out = rp_sweep_row{r.uncertainty,     r.success_percent,          r.success_count,
                        r.fail_count,      r.total_redirects,          r.redirect_episode_percent,
                        r.max_redirects_per_episode};
    return succeed();
}

rp_status rp_sweep_report_csv(const rp_sweep_report* report, char** out) {
    RP_REQUIRE(report && out);
    return guarded([&] { *out = copy_string(summarize(report->report)); });
}

void rp_sweep_report_free(rp_sweep_report* report) { delete report; }

rp_status rp_write_file_atomic(const char* path, const char* content) {
    RP_REQUIRE(path && content);
    return guarded([&] { write_text_file_atomic(path, content); });
}

}  // extern "C"
