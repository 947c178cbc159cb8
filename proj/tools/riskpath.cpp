// riskpath command-line frontend. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riskpath/riskpath.h"

namespace {

enum Exit { kOk = 0, kInputError = 1, kNoSolution = 2 };

struct Failure {
    rp_status status;
};

// Throws Failure after printing the library's message.
void check(rp_status status, const std::string& context = {}) {
    if (status == RP_OK) return;
    std::cerr << "riskpath: ";
    if (!context.empty()) std::cerr << context << ": ";
    std::cerr << rp_last_error() << '\n';
    throw Failure{status};
}

int exit_code(rp_status status) {
    return status == RP_ERR_NO_PATH || status == RP_ERR_INVALID_PATH ? kNoSolution : kInputError;
}

struct EnvDeleter {
    void operator()(rp_environment* p) const { rp_environment_free(p); }
};
struct MissionDeleter {
    void operator()(rp_mission* p) const { rp_mission_free(p); }
};
struct PlanDeleter {
    void operator()(rp_plan* p) const { rp_plan_free(p); }
};
struct ConfigDeleter {
    void operator()(rp_sweep_config* p) const { rp_sweep_config_free(p); }
};
struct ReportDeleter {
    void operator()(rp_sweep_report* p) const { rp_sweep_report_free(p); }
};
struct StringDeleter {
    void operator()(char* p) const { rp_string_free(p); }
};

using Env = std::unique_ptr<rp_environment, EnvDeleter>;
using Mission = std::unique_ptr<rp_mission, MissionDeleter>;
using String = std::unique_ptr<char, StringDeleter>;

Env load_env(const std::string& path) {
    rp_environment* env = nullptr;
    if (path.empty())
        check(rp_environment_default(&env));
    else
        check(rp_environment_load(path.c_str(), &env));
    return Env(env);
}

Mission load_mission(const rp_environment* env, const std::string& path) {
    rp_mission* mission = nullptr;
    if (path.empty())
        check(rp_mission_case_study(&mission));
    else
        check(rp_mission_load(env, path.c_str(), &mission));
    return Mission(mission);
}

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string join(const uint32_t* nodes, size_t n) {
    std::string out;
    for (size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += std::to_string(nodes[i]);
    }
    return out;
}

// "POS" or "POS:GOAL".
std::optional<rp_human> parse_human(const std::string& text, double uncertainty) {
    if (text.empty()) return std::nullopt;
    rp_human h{};
    h.uncertainty = uncertainty;
    const auto colon = text.find(':');
    auto parse_node = [&](std::string_view part, uint32_t& out) {
        const auto res = std::from_chars(part.data(), part.data() + part.size(), out);
        if (res.ec != std::errc() || res.ptr != part.data() + part.size() || part.empty()) {
            std::cerr << "riskpath: --human: expected POS or POS:GOAL, got \"" << text << "\"\n";
            throw Failure{RP_ERR_INVALID_INPUT};
        }
    };
    const std::string_view all(text);
    parse_node(all.substr(0, colon), h.position);
    if (colon != std::string::npos) {
        parse_node(all.substr(colon + 1), h.goal);
        h.has_goal = 1;
    }
    return h;
}

struct Options {
    std::string env;
    std::string mission;
    std::string config;
    std::string out;
    std::string human;
    std::string label;  // defaults to the node sequence
    std::optional<uint64_t> seed;
    std::optional<uint64_t> episodes;
    std::optional<uint64_t> workers;
    std::optional<uint64_t> trials;
    std::vector<double> levels;
    std::vector<uint32_t> path;
    double uncertainty = 0.0;
    uint32_t start = 0;
    uint32_t goal = 0;
};

void print_path(const char* name, const rp_plan* plan, rp_path_kind kind) {
    const uint32_t* nodes = nullptr;
    const size_t n = rp_plan_nodes(plan, kind, &nodes);
    std::cout << name << "_path: " << join(nodes, n) << '\n'
              << name << "_probability: " << fmt(rp_plan_probability(plan, kind)) << '\n'
              << name << "_distance: " << fmt(rp_plan_distance(plan, kind)) << '\n';
}

int cmd_plan(const Options& o) {
    const Env env = load_env(o.env);
    const auto human = parse_human(o.human, o.uncertainty);
    rp_plan* raw = nullptr;
    check(rp_plan_route(env.get(), o.start, o.goal, human ? &*human : nullptr, nullptr, &raw));
    const std::unique_ptr<rp_plan, PlanDeleter> plan(raw);
    print_path("distance", plan.get(), RP_PATH_DISTANCE);
    print_path("probability", plan.get(), RP_PATH_PROBABILITY);
    std::cout << "selected: " << (rp_plan_chose_distance(plan.get()) ? "distance" : "probability")
              << '\n';
    print_path("selected", plan.get(), RP_PATH_SELECTED);
    return kOk;
}

int cmd_validate(const Options& o) {
    const Env env = load_env(o.env);
    const auto human = parse_human(o.human, o.uncertainty);
    double p = 0.0;
    check(rp_path_probability(env.get(), o.path.data(), o.path.size(),
                              human ? &*human : nullptr, nullptr, &p));
    std::cout << "path: " << join(o.path.data(), o.path.size()) << '\n'
              << "probability: " << fmt(p) << '\n';
    if (o.trials) {
        double estimate = 0.0;
        check(rp_path_simulate(env.get(), o.path.data(), o.path.size(), *o.trials,
                               o.seed.value_or(0), &estimate));
        std::cout << "simulated: " << fmt(estimate) << " (" << *o.trials << " trials)\n";
    }
    return kOk;
}

int cmd_export_prism(const Options& o) {
    const Env env = load_env(o.env);
    std::string label = o.label;
    if (label.empty()) {
        for (std::size_t i = 0; i < o.path.size(); ++i)
            label += (i ? "-" : "") + std::to_string(o.path[i]);
    }
    char* model = nullptr;
    char* props = nullptr;
    check(rp_export_prism(env.get(), o.path.data(), o.path.size(), label.c_str(), &model,
                          &props));
    const String m(model), pr(props);
    double p = 0.0;
    check(rp_path_probability(env.get(), o.path.data(), o.path.size(), nullptr, nullptr, &p));
    check(rp_write_file_atomic((o.out + ".nm").c_str(), m.get()), o.out + ".nm");
    check(rp_write_file_atomic((o.out + ".props").c_str(), pr.get()), o.out + ".props");
    std::cout << "model: " << o.out << ".nm\n"
              << "properties: " << o.out << ".props\n"
              << "probability: " << fmt(p) << '\n';
    return kOk;
}

int cmd_simulate(const Options& o) {
    const Env env = load_env(o.env);
    const Mission mission = load_mission(env.get(), o.mission);
    const uint64_t seed = o.seed.value_or(0);
    const uint64_t episodes = o.episodes.value_or(1);
    std::cout << "episode,seed,success,failure_cause,steps,redirects,final_node\n";
    for (uint64_t i = 0; i < episodes; ++i) {
        const uint64_t s = rp_derive_seed(seed, 0, i);
        rp_episode_outcome out{};
        check(rp_run_episode(env.get(), mission.get(), nullptr, o.uncertainty, s, &out));
        std::cout << i << ',' << s << ',' << out.success << ','
                  << rp_failure_cause_name(out.failure_cause) << ',' << out.steps << ','
                  << out.redirects << ',' << out.final_robot_node << '\n';
    }
    return kOk;
}

int cmd_sweep(const Options& o) {
    rp_sweep_config* raw = nullptr;
    if (!o.config.empty()) {
        check(rp_sweep_config_load(o.config.c_str(), &raw));
    } else {
        const Env env = load_env(o.env);
        const Mission mission = load_mission(env.get(), o.mission);
        check(rp_sweep_config_create(env.get(), mission.get(), &raw));
    }
    const std::unique_ptr<rp_sweep_config, ConfigDeleter> cfg(raw);
    if (o.seed) check(rp_sweep_config_set_seed(cfg.get(), *o.seed));
    if (o.episodes) check(rp_sweep_config_set_episodes(cfg.get(), *o.episodes), "--episodes");
    if (o.workers) check(rp_sweep_config_set_workers(cfg.get(), *o.workers));
    if (!o.levels.empty())
        check(rp_sweep_config_set_levels(cfg.get(), o.levels.data(), o.levels.size()),
              "--levels");

    rp_sweep_report* rep = nullptr;
    check(rp_run_sweep(cfg.get(), &rep));
    const std::unique_ptr<rp_sweep_report, ReportDeleter> report(rep);
    char* csv = nullptr;
    check(rp_sweep_report_csv(report.get(), &csv));
    const String text(csv);
    if (!o.out.empty()) check(rp_write_file_atomic(o.out.c_str(), text.get()), o.out);
    std::cout << text.get();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-aware path planning, validation and mission simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "riskpath 0.1.0");
    Options o;

    auto env_opt = [&](CLI::App* sub) {
        sub->add_option("--env", o.env, "Environment JSON file (default: bundled environment)");
    };
    auto human_opts = [&](CLI::App* sub) {
        sub->add_option("--human", o.human, "Human as POS or POS:GOAL; heats the environment");
        sub->add_option("--uncertainty", o.uncertainty, "Human uncertainty in [0, 1]")
            ->check(CLI::Range(0.0, 1.0));
    };

    auto* plan = app.add_subcommand("plan", "Find, validate and select a path");
    env_opt(plan);
    plan->add_option("--start", o.start, "Start node")->required();
    plan->add_option("--goal", o.goal, "Goal node")->required();
    human_opts(plan);

    auto* validate = app.add_subcommand("validate", "Probability of completing a fixed path");
    env_opt(validate);
    validate->add_option("--path", o.path, "Comma-separated node sequence")
        ->required()
        ->delimiter(',');
    human_opts(validate);
    validate->add_option("--trials", o.trials, "Also estimate by Monte-Carlo simulation");
    validate->add_option("--seed", o.seed, "Seed for --trials");

    auto* prism = app.add_subcommand("export-prism", "Write a PRISM model and property file");
    env_opt(prism);
    prism->add_option("--path", o.path, "Comma-separated node sequence")
        ->required()
        ->delimiter(',');
    prism->add_option("--out", o.out, "Output prefix; writes PREFIX.nm and PREFIX.props")
        ->required();
    prism->add_option("--label", o.label, "Label written into the model comment");

    auto* simulate = app.add_subcommand("simulate", "Run mission episodes and print one CSV row each");
    env_opt(simulate);
    simulate->add_option("--mission", o.mission, "Mission JSON file (default: case study)");
    simulate->add_option("--uncertainty", o.uncertainty, "Human uncertainty in [0, 1]")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--seed", o.seed, "Base seed");
    simulate->add_option("--episodes", o.episodes, "Number of episodes (default 1)");

    auto* sweep = app.add_subcommand("sweep", "Run the uncertainty sweep and write the CSV summary");
    sweep->add_option("--config", o.config, "Sweep configuration JSON file");
    env_opt(sweep);
    sweep->add_option("--mission", o.mission, "Mission JSON file (default: case study)");
    sweep->add_option("--seed", o.seed, "Base seed");
    sweep->add_option("--episodes", o.episodes, "Episodes per level");
    sweep->add_option("--levels", o.levels, "Comma-separated uncertainty levels")->delimiter(',');
    sweep->add_option("--workers", o.workers, "Worker threads (0: all cores)");
    sweep->add_option("--out", o.out, "CSV output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*plan) return cmd_plan(o);
        if (*validate) return cmd_validate(o);
        if (*prism) return cmd_export_prism(o);
        if (*simulate) return cmd_simulate(o);
        if (*sweep) return cmd_sweep(o);
    } catch (const Failure& f) {
        return exit_code(f.status);
    }
    return kInputError;
}
