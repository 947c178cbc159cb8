#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "riskpath/error.hpp"
#include "riskpath/io.hpp"

using namespace riskpath;
namespace fs = std::filesystem;

namespace {

std::string mission_error(const std::string& doc) {
    try {
        parse_mission(doc, *default_environment());
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

std::string config_error(const std::string& doc) {
    try {
        parse_sweep_config(doc, ".");
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("riskpath_io_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("bundled data files match the built-in defaults") {
    const std::string dir = RISKPATH_DATA_DIR;
    const EnvironmentGraph env = load_environment_file(dir + "/default_environment.json");
    CHECK(env == *default_environment());
    const MissionSpec m = load_mission_file(dir + "/case_study_mission.json", env);
    const MissionSpec cs = case_study_mission();
    CHECK(m.start == cs.start);
    CHECK(m.tasks == cs.tasks);
    CHECK(m.end == cs.end);
    CHECK(m.safe_locations == cs.safe_locations);
    CHECK(m.threshold == 0.9);
    CHECK(m.hold_limit == 10);
}

TEST_CASE("mission parsing") {
    const MissionSpec m =
        parse_mission(R"({"start": 3, "tasks": [9, 4], "end": 22})", *default_environment());
    CHECK(m.start == NodeId{3});
    CHECK(m.tasks == std::vector<NodeId>{4, 9});
    CHECK(m.safe_locations.empty());
    CHECK(m.threshold == 0.9);
    CHECK(m.hold_limit == 10);

    CHECK(mission_error(R"({"start": 0, "tasks": [4, 4], "end": 1})").find("duplicate") !=
          std::string::npos);
    CHECK(mission_error(R"({"start": "somewhere", "tasks": [], "end": 1})").find("start") !=
          std::string::npos);
    CHECK(mission_error(R"({"start": 0, "tasks": [], "end": 1, "speed": 2})").find("speed") !=
          std::string::npos);
    CHECK(mission_error(R"({"start": 0, "tasks": [], "end": 99})").find("99") !=
          std::string::npos);
    CHECK(mission_error(R"({"start": 0, "tasks": [1.5], "end": 1})").find("tasks") !=
          std::string::npos);
    CHECK(mission_error(R"({"start": 0, "tasks": [], "end": 1, "threshold": 1.5})")
              .find("threshold") != std::string::npos);
    CHECK(mission_error(R"({"start": 0, "tasks": [], "end": 1, "hold_limit": -1})")
              .find("hold_limit") != std::string::npos);
    CHECK(mission_error(R"({"tasks": [], "end": 1})").find("start") != std::string::npos);
}

TEST_CASE("sweep config parsing") {
    const SweepConfig cfg = parse_sweep_config(R"({
        "environment": "default", "mission": "case-study",
        "heat": {"path_heat": 0.3, "neighbor_heat": 0.01, "neighbor_reach": 2},
        "threshold": 0.8, "hold_limit": 5, "redirect_after_holds": 1, "max_steps": 500,
        "levels": [0, 0.5], "episodes_per_level": 7, "seed": 11, "workers": 2
    })", ".");
    CHECK(cfg.base.heat.path_heat == 0.3);
    CHECK(cfg.base.heat.neighbor_heat == 0.01);
    CHECK(cfg.base.heat.neighbor_reach == 2);
    CHECK(cfg.base.mission.threshold == 0.8);
    CHECK(cfg.base.mission.hold_limit == 5);
    CHECK(cfg.base.redirect_after_holds == 1);
    CHECK(cfg.base.max_steps == 500);
    CHECK(cfg.levels == std::vector<double>{0.0, 0.5});
    CHECK(cfg.episodes_per_level == 7);
    CHECK(cfg.base.seed == 11);
    CHECK(cfg.workers == 2);

    const SweepConfig d = parse_sweep_config(R"({"environment": "default", "mission": "case-study"})", ".");
    CHECK(d.levels == default_levels());
    CHECK(d.episodes_per_level == 25000);
    CHECK(d.base.heat.path_heat == HeatParams{}.path_heat);

    CHECK(config_error(R"({"mission": "case-study"})").find("environment") != std::string::npos);
    CHECK(config_error(R"({"environment": "default", "mission": "case-study", "levels": [2]})")
              .find("levels") != std::string::npos);
    CHECK(config_error(R"({"environment": "default", "mission": "case-study", "levels": []})")
              .find("levels") != std::string::npos);
    CHECK(config_error(R"({"environment": "default", "mission": "case-study", "episodes_per_level": 0})")
              .find("episodes_per_level") != std::string::npos);
    CHECK(config_error(R"({"environment": "default", "mission": "case-study", "heat": {"spread": 1}})")
              .find("spread") != std::string::npos);
    CHECK(config_error(R"({"environment": "missing.json", "mission": "case-study"})")
              .find("missing.json") != std::string::npos);
}

TEST_CASE("shipped sweep configs parse") {
    const std::string dir = RISKPATH_DATA_DIR;
    const SweepConfig desk = load_sweep_config_file(dir + "/sweep_desk.json");
    CHECK(desk.levels.size() == 11);
    CHECK(desk.episodes_per_level == 2000);
    const SweepConfig full = load_sweep_config_file(dir + "/sweep_full.json");
    CHECK(full.episodes_per_level == 25000);
    CHECK(*full.base.environment == *default_environment());
}

TEST_CASE("relative paths resolve against the config directory") {
    TempDir tmp;
    write_text_file_atomic(tmp.path / "env.json",
                           R"({"nodes": 2, "edges": [[0, 1, 1.0, "Low"]]})");
    write_text_file_atomic(tmp.path / "m.json", R"({"start": 0, "tasks": [], "end": 1})");
    write_text_file_atomic(tmp.path / "cfg.json",
                           R"({"environment": "env.json", "mission": "m.json", "levels": [0]})");
    const SweepConfig cfg = load_sweep_config_file(tmp.path / "cfg.json");
    CHECK(cfg.base.environment->node_count() == 2);
    CHECK(cfg.base.mission.end == 1);
}

TEST_CASE("file helpers") {
    TempDir tmp;
    const fs::path file = tmp.path / "out.csv";
    write_text_file_atomic(file, "a\n");
    write_text_file_atomic(file, "b\n");
    CHECK(read_text_file(file) == "b\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp.path)) ++entries;
    CHECK(entries == 1);

    try {
        read_text_file(tmp.path / "nope.json");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
        CHECK(std::string(e.what()).find("nope.json") != std::string::npos);
    }
    CHECK_THROWS_AS(write_text_file_atomic(tmp.path / "no" / "dir.csv", "x"), Error);
}
