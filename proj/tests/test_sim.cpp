#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "riskpath/error.hpp"
#include "riskpath/io.hpp"
#include "riskpath/sim.hpp"

using namespace riskpath;

namespace {

EpisodeConfig case_study(double u, std::uint64_t seed) {
    EpisodeConfig cfg;
    cfg.environment = default_environment();
    cfg.mission = case_study_mission();
    cfg.uncertainty = u;
    cfg.seed = seed;
    return cfg;
}

// Inverse of summarize, for the numeric fields.
SweepReport parse_summary(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == kSummaryHeader);
    SweepReport r;
    while (std::getline(in, line)) {
        std::istringstream f(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(f, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 7);
        SweepRow row;
        row.uncertainty = std::stod(cells[0]);
        row.success_percent = std::stod(cells[1]);
        row.success_count = std::stoull(cells[2]);
        row.fail_count = std::stoull(cells[3]);
        row.total_redirects = std::stoull(cells[4]);
        row.redirect_episode_percent = std::stod(cells[5]);
        row.max_redirects_per_episode = std::stoull(cells[6]);
        r.rows.push_back(row);
    }
    return r;
}

}  // namespace

TEST_CASE("run_episode is deterministic") {
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        const EpisodeConfig cfg = case_study(0.4, seed);
        std::vector<TickRecord> a, b;
        const EpisodeOutcome first = run_episode(cfg, {}, nullptr, &a);
        CHECK(first == run_episode(cfg, {}, nullptr, &b));
        CHECK(a.size() == b.size());
        const PathTable table(cfg.environment->view());
        CHECK(first == run_episode(cfg, {}, &table));
    }
}

TEST_CASE("happy path: idle human off the route") {
    // 3x3 grid; with p_fail = 0 every unheated edge is certain.
    const std::string doc = R"({
        "nodes": 9,
        "risk_table": {"Low": [0.999, 0.001]},
        "edges": [[0,1,1,"Low"],[1,2,1,"Low"],[3,4,1,"Low"],[4,5,1,"Low"],[6,7,1,"Low"],
                  [7,8,1,"Low"],[0,3,1,"Low"],[3,6,1,"Low"],[1,4,1,"Low"],[4,7,1,"Low"],
                  [2,5,1,"Low"],[5,8,1,"Low"]]
    })";
    EpisodeConfig cfg;
    cfg.environment = std::make_shared<EnvironmentGraph>(parse_environment(doc));
    cfg.mission.start = 0;
    cfg.mission.tasks = {2, 8};
    cfg.mission.end = 6;
    cfg.mission.safe_locations = {4};
    const MissionPlan plan = order_tasks(cfg.environment->view(), cfg.mission, 0);
    for (const Path& leg : plan.legs) REQUIRE_FALSE(leg.contains(4));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        cfg.seed = seed;
        const EpisodeOutcome o = run_episode(cfg, EpisodeSetup{std::nullopt, 4});
        CHECK(o.success);
        CHECK(o.redirects == 0);
        CHECK(o.final_robot_node == 6);
        CHECK(o.failure_cause == FailureCause::None);
    }
}

TEST_CASE("a human standing on a task is redirected before the task completes") {
    int reached = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const EpisodeConfig cfg = case_study(0.0, seed);
        std::vector<TickRecord> trace;
        run_episode(cfg, EpisodeSetup{0, 9}, nullptr, &trace);
        std::optional<std::uint64_t> first_redirect, arrival;
        for (const TickRecord& r : trace) {
            if (r.redirect_target && !first_redirect) first_redirect = r.tick;
            if (r.action == TickRecord::Action::Advance && r.next == 9 && !arrival)
                arrival = r.tick;
        }
        if (!arrival) continue;
        ++reached;
        REQUIRE(first_redirect);
        CHECK(*first_redirect < *arrival);
    }
    CHECK(reached > 40);
}

TEST_CASE("property: episode accounting and redirect targets") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const MissionSpec spec = case_study_mission();
    for (int trial = 0; trial < 1000; ++trial) {
        EpisodeConfig cfg = case_study(std::round(unit(rng) * 10) / 10, rng());
        std::vector<TickRecord> trace;
        const EpisodeOutcome o = run_episode(cfg, {}, nullptr, &trace);
        REQUIRE(o.success == (o.failure_cause == FailureCause::None));
        REQUIRE(o.steps == trace.size());
        std::uint64_t issued = 0;
        for (const TickRecord& r : trace) {
            if (!r.redirect_target) continue;
            ++issued;
            REQUIRE(r.action == TickRecord::Action::Hold);
            REQUIRE(std::find(spec.safe_locations.begin(), spec.safe_locations.end(),
                              *r.redirect_target) != spec.safe_locations.end());
            REQUIRE(*r.redirect_target != r.human);
        }
        REQUIRE(issued == o.redirects);
        for (std::size_t i = 0; i + 1 < trace.size(); ++i)
            REQUIRE(trace[i].holds < spec.hold_limit);
        if (trace.empty()) {
            REQUIRE(o.success);
            continue;
        }
        const TickRecord& last = trace.back();
        switch (o.failure_cause) {
            case FailureCause::None:
                REQUIRE(last.action == TickRecord::Action::Advance);
                REQUIRE(o.final_robot_node == spec.end);
                break;
            case FailureCause::HoldTimeout:
                REQUIRE(last.action == TickRecord::Action::Hold);
                REQUIRE(last.holds == spec.hold_limit);
                break;
            case FailureCause::Catastrophic:
                REQUIRE(last.action == TickRecord::Action::Fail);
                break;
            case FailureCause::StepLimit:
                REQUIRE(o.steps == cfg.max_steps);
                break;
        }
    }
}

TEST_CASE("success rate is at least the plan probability with an idle human") {
    EpisodeConfig cfg = case_study(0.0, 0);
    const NodeId start = 0;
    const MissionPlan plan = order_tasks(cfg.environment->view(), cfg.mission, start);
    std::optional<NodeId> seat;
    for (NodeId s = 0; s < cfg.environment->node_count(); ++s) {
        if (std::none_of(plan.legs.begin(), plan.legs.end(),
                         [&](const Path& leg) { return leg.contains(s); })) {
            seat = s;
            break;
        }
    }
    REQUIRE(seat);
    cfg.mission.safe_locations = {*seat};
    const int n = 4000;
    int ok = 0;
    for (int i = 0; i < n; ++i) {
        cfg.seed = derive_seed(5, 0, i);
        const EpisodeOutcome o = run_episode(cfg, EpisodeSetup{start, *seat});
        ok += o.success;
        REQUIRE(o.redirects == 0);
    }
    const double p = plan.plan_probability;
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(static_cast<double>(ok) / n >= p - 3 * se);
}

TEST_CASE("summarize formats and round-trips") {
    const EpisodeConfig cfg = case_study(0.0, 3);
    const std::vector<double> one{0.0};
    const SweepReport r = run_sweep(cfg, one, 1, 1);
    REQUIRE(r.rows.size() == 1);
    const EpisodeOutcome o = run_episode([&] {
        EpisodeConfig c = cfg;
        c.seed = derive_seed(3, 0, 0);
        return c;
    }());
    CHECK(r.rows[0].success_count == (o.success ? 1u : 0u));
    CHECK(r.rows[0].total_redirects == o.redirects);
    const std::string csv = summarize(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

    SweepReport table;
    for (double u : default_levels()) {
        SweepRow row;
        row.uncertainty = u;
        row.success_count = 24955;
        row.fail_count = 45;
        row.success_percent = 99.82;
        row.total_redirects = 11370;
        row.redirect_episode_percent = 45.48;
        row.max_redirects_per_episode = 6;
        table.rows.push_back(row);
    }
    const std::string full = summarize(table);
    CHECK(std::count(full.begin(), full.end(), '\n') == 12);
    CHECK(full.find("\n0.3,99.82,24955,45,11370,45.48,6\n") != std::string::npos);
    const SweepReport back = parse_summary(full);
    REQUIRE(back.rows.size() == 11);
    for (std::size_t i = 0; i < 11; ++i) {
        CHECK(back.rows[i].uncertainty == table.rows[i].uncertainty);
        CHECK(back.rows[i].success_percent == table.rows[i].success_percent);
        CHECK(back.rows[i].success_count == table.rows[i].success_count);
        CHECK(back.rows[i].fail_count == table.rows[i].fail_count);
        CHECK(back.rows[i].total_redirects == table.rows[i].total_redirects);
        CHECK(back.rows[i].redirect_episode_percent == table.rows[i].redirect_episode_percent);
        CHECK(back.rows[i].max_redirects_per_episode == table.rows[i].max_redirects_per_episode);
    }
}

TEST_CASE("summarize_level percentages") {
    std::vector<EpisodeOutcome> outs(3);
    outs[0].success = true;
    outs[0].redirects = 2;
    outs[1].failure_cause = FailureCause::HoldTimeout;
    outs[2].success = true;
    const SweepRow row = summarize_level(0.5, outs);
    CHECK(row.success_count == 2);
    CHECK(row.fail_count == 1);
    CHECK(row.success_percent == doctest::Approx(200.0 / 3));
    CHECK(row.redirect_episode_percent == doctest::Approx(100.0 / 3));
    CHECK(row.total_redirects == 2);
    CHECK(row.max_redirects_per_episode == 2);
}

TEST_CASE("run_sweep is independent of worker count") {
    const EpisodeConfig cfg = case_study(0.0, 42);
    const std::vector<double> levels{0.0, 0.5, 1.0};
    const std::string one = summarize(run_sweep(cfg, levels, 150, 1));
    CHECK(summarize(run_sweep(cfg, levels, 150, 4)) == one);
    CHECK(summarize(run_sweep(cfg, levels, 150, 7)) == one);
    const SweepReport r = parse_summary(one);
    for (const SweepRow& row : r.rows) CHECK(row.success_count + row.fail_count == 150);
}

TEST_CASE("run_sweep and episode validation") {
    EpisodeConfig cfg = case_study(0.0, 1);
    const std::vector<double> bad{1.5};
    CHECK_THROWS_AS(run_sweep(cfg, bad, 1, 1), Error);
    const std::vector<double> ok{0.0};
    CHECK_THROWS_AS(run_sweep(cfg, ok, 0, 1), Error);
    cfg.uncertainty = -0.1;
    CHECK_THROWS_AS(run_episode(cfg), Error);
    cfg = case_study(0.0, 1);
    cfg.redirect_after_holds = 0;
    CHECK_THROWS_AS(run_episode(cfg), Error);
    cfg = case_study(0.0, 1);
    cfg.environment.reset();
    CHECK_THROWS_AS(run_episode(cfg), Error);
}
