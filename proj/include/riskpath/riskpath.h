/* C interface to the riskpath library. */
#ifndef RISKPATH_RISKPATH_H
#define RISKPATH_RISKPATH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RISKPATH_BUILDING)
#    define RP_API __declspec(dllexport)
#  else
#    define RP_API __declspec(dllimport)
#  endif
#else
#  define RP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rp_status {
    RP_OK = 0,
    RP_ERR_INVALID_ARGUMENT = 1, /* null handle or out-pointer */
    RP_ERR_INVALID_INPUT = 2,    /* malformed document or out-of-range value */
    RP_ERR_IO = 3,
    RP_ERR_NO_PATH = 4,
    RP_ERR_INVALID_PATH = 5,     /* node sequence is not a connected path */
    RP_ERR_INTERNAL = 6
} rp_status;

typedef struct rp_environment rp_environment;
typedef struct rp_mission rp_mission;
typedef struct rp_plan rp_plan;
typedef struct rp_sweep_config rp_sweep_config;
typedef struct rp_sweep_report rp_sweep_report;

typedef struct rp_heat_params {
    double path_heat;
    double neighbor_heat;
    uint32_t neighbor_reach;
} rp_heat_params;

typedef struct rp_human {
    uint32_t position;
    uint32_t goal;
    int has_goal;
    double uncertainty;
} rp_human;

typedef enum rp_failure_cause {
    RP_FAILURE_NONE = 0,
    RP_FAILURE_HOLD_TIMEOUT = 1,
    RP_FAILURE_CATASTROPHIC = 2,
    RP_FAILURE_STEP_LIMIT = 3
} rp_failure_cause;

typedef struct rp_episode_outcome {
    int success;
    rp_failure_cause failure_cause;
    uint64_t steps;
    uint64_t redirects;
    uint32_t final_robot_node;
} rp_episode_outcome;

typedef struct rp_sweep_row {
    double uncertainty;
    double success_percent;
    uint64_t success_count;
    uint64_t fail_count;
    uint64_t total_redirects;
    double redirect_episode_percent;
    uint64_t max_redirects_per_episode;
} rp_sweep_row;

typedef enum rp_path_kind {
    RP_PATH_SELECTED = 0,
    RP_PATH_DISTANCE = 1,
    RP_PATH_PROBABILITY = 2
} rp_path_kind;

/* Message of the last failed call on this thread; empty after success. */
RP_API const char* rp_last_error(void);
RP_API const char* rp_status_name(rp_status status);
RP_API const char* rp_failure_cause_name(rp_failure_cause cause);
/* Releases strings returned through char** out-parameters. */
RP_API void rp_string_free(char* s);

RP_API rp_heat_params rp_default_heat_params(void);
RP_API uint64_t rp_derive_seed(uint64_t base, uint64_t level, uint64_t index);

/* Environments */
RP_API rp_status rp_environment_load(const char* path, rp_environment** out);
RP_API rp_status rp_environment_parse(const char* json, rp_environment** out);
RP_API rp_status rp_environment_default(rp_environment** out);
RP_API rp_status rp_environment_to_json(const rp_environment* env, char** out);
RP_API size_t rp_environment_node_count(const rp_environment* env);
RP_API size_t rp_environment_edge_count(const rp_environment* env);
RP_API void rp_environment_free(rp_environment* env);

/* Path planning. `human` and `heat` may be null; with a human the plan runs
 * on the heated environment (heat defaults to rp_default_heat_params). */
RP_API rp_status rp_plan_route(const rp_environment* env, uint32_t start, uint32_t goal,
                               const rp_human* human, const rp_heat_params* heat,
                               rp_plan** out);
/* Number of nodes in the chosen path; *nodes stays valid until rp_plan_free. */
RP_API size_t rp_plan_nodes(const rp_plan* plan, rp_path_kind kind, const uint32_t** nodes);
RP_API double rp_plan_probability(const rp_plan* plan, rp_path_kind kind);
RP_API double rp_plan_distance(const rp_plan* plan, rp_path_kind kind);
RP_API int rp_plan_chose_distance(const rp_plan* plan);
RP_API void rp_plan_free(rp_plan* plan);

/* Probability of completing a fixed path, optionally under a human's heat. */
RP_API rp_status rp_path_probability(const rp_environment* env, const uint32_t* nodes,
                                     size_t count, const rp_human* human,
                                     const rp_heat_params* heat, double* out);
/* Monte-Carlo estimate of the same quantity on the unheated environment. */
RP_API rp_status rp_path_simulate(const rp_environment* env, const uint32_t* nodes,
                                  size_t count, uint64_t trials, uint64_t seed,
                                  double* out);
RP_API rp_status rp_export_prism(const rp_environment* env, const uint32_t* nodes,
                                 size_t count, const char* label, char** model,
                                 char** properties);

/* Missions */
RP_API rp_status rp_mission_load(const rp_environment* env, const char* path, rp_mission** out);
RP_API rp_status rp_mission_parse(const rp_environment* env, const char* json,
                                  rp_mission** out);
RP_API rp_status rp_mission_case_study(rp_mission** out);
RP_API void rp_mission_free(rp_mission* mission);

/* One episode. `heat` may be null. */
RP_API rp_status rp_run_episode(const rp_environment* env, const rp_mission* mission,
                                const rp_heat_params* heat, double uncertainty,
                                uint64_t seed, rp_episode_outcome* out);

/* Sweeps */
RP_API rp_status rp_sweep_config_load(const char* path, rp_sweep_config** out);
RP_API rp_status rp_sweep_config_create(const rp_environment* env, const rp_mission* mission,
                                        rp_sweep_config** out);
RP_API rp_status rp_sweep_config_set_seed(rp_sweep_config* cfg, uint64_t seed);
RP_API rp_status rp_sweep_config_set_episodes(rp_sweep_config* cfg, uint64_t episodes);
RP_API rp_status rp_sweep_config_set_workers(rp_sweep_config* cfg, uint64_t workers);
RP_API rp_status rp_sweep_config_set_levels(rp_sweep_config* cfg, const double* levels,
                                            size_t count);
RP_API void rp_sweep_config_free(rp_sweep_config* cfg);

RP_API rp_status rp_run_sweep(const rp_sweep_config* cfg, rp_sweep_report** out);
RP_API size_t rp_sweep_report_row_count(const rp_sweep_report* report);
RP_API rp_status rp_sweep_report_row(const rp_sweep_report* report, size_t index,
                                     rp_sweep_row* out);
RP_API rp_status rp_sweep_report_csv(const rp_sweep_report* report, char** out);
RP_API void rp_sweep_report_free(rp_sweep_report* report);

/* Writes through a temporary file and rename. */
RP_API rp_status rp_write_file_atomic(const char* path, const char* content);

#ifdef __cplusplus
}
#endif

#endif
