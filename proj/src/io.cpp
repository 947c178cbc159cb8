#include "riskpath/io.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "riskpath/error.hpp"

namespace riskpath {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::InvalidInput, where + ": " + what);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) fail(where, "unknown field \"" + key + "\"");
    }
}

const json& require(const json& obj, const char* field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end()) fail(where, std::string("missing field \"") + field + "\"");
    return *it;
}

NodeId as_node(const json& v, const std::string& where) {
    if (!v.is_number_unsigned()) fail(where, "expected a non-negative integer node id");
    const auto n = v.get<std::uint64_t>();
    if (n > std::numeric_limits<NodeId>::max()) fail(where, "node id out of range");
    return static_cast<NodeId>(n);
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& where) {
    if (!v.is_number_unsigned()) fail(where, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::uint32_t as_u32(const json& v, const std::string& where) {
    const auto n = as_count(v, where);
    if (n > std::numeric_limits<std::uint32_t>::max()) fail(where, "value too large");
    return static_cast<std::uint32_t>(n);
}

std::vector<NodeId> as_node_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of node ids");
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_node(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

// Shortest decimal that round-trips.
std::string number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

EnvironmentGraph parse_environment(std::string_view json_text) {
    const json doc = parse_json(json_text);
    reject_unknown(doc, "environment", {"nodes", "risk_table", "edges"});

    const json& nodes = require(doc, "nodes", "environment");
    std::size_t node_count = 0;
    std::vector<NodeInfo> info;
    if (nodes.is_number_unsigned()) {
        node_count = nodes.get<std::size_t>();
    } else if (nodes.is_array()) {
        node_count = nodes.size();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string where = "nodes[" + std::to_string(i) + "]";
            reject_unknown(nodes[i], where, {"label", "xy"});
            NodeInfo ni;
            if (auto it = nodes[i].find("label"); it != nodes[i].end()) {
                if (!it->is_string()) fail(where + ".label", "expected a string");
                ni.label = it->get<std::string>();
            }
            if (auto it = nodes[i].find("xy"); it != nodes[i].end()) {
                if (!it->is_array() || it->size() != 2)
                    fail(where + ".xy", "expected [x, y]");
                ni.xy = std::array<double, 2>{as_number((*it)[0], where + ".xy"),
                                              as_number((*it)[1], where + ".xy")};
            }
            info.push_back(std::move(ni));
        }
    } else {
        fail("nodes", "expected a node count or an array of node objects");
    }
    if (node_count == 0) fail("nodes", "environment must have at least one node");

    RiskTable table = default_risk_table();
    if (auto it = doc.find("risk_table"); it != doc.end()) {
        if (!it->is_object()) fail("risk_table", "expected an object");
        table.clear();
        for (const auto& [name, row] : it->items()) {
            const std::string where = "risk_table." + name;
            const auto risk = parse_risk_class(name);
            if (!risk) fail(where, "unknown risk class (expected Low, Medium, High or Severe)");
            if (!row.is_array() || row.size() != 2)
                fail(where, "expected [p_success, p_retry]");
            try {
                table.emplace(*risk, OutcomeProbs::make(as_number(row[0], where),
                                                        as_number(row[1], where)));
            } catch (const Error& e) {
                fail(where, e.what());
            }
        }
    }

    const json& edges_doc = require(doc, "edges", "environment");
    if (!edges_doc.is_array()) fail("edges", "expected an array");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < edges_doc.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        const json& row = edges_doc[i];
        if (!row.is_array() || row.size() != 4) fail(where, "expected [a, b, distance, class]");
        Edge e;
        e.a = as_node(row[0], where);
        e.b = as_node(row[1], where);
        e.distance = as_number(row[2], where);
        if (!row[3].is_string()) fail(where, "risk class must be a string");
        const auto risk = parse_risk_class(row[3].get<std::string>());
        if (!risk) fail(where, "unknown risk class \"" + row[3].get<std::string>() + "\"");
        e.risk = *risk;
        edges.push_back(e);
    }

    try {
        return EnvironmentGraph(node_count, std::move(edges), std::move(table), std::move(info));
    } catch (const Error& e) {
        fail("environment", e.what());
    }
}

EnvironmentGraph load_environment_file(const std::filesystem::path& path) {
    try {
        return parse_environment(read_text_file(path));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) throw;
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string save_environment(const EnvironmentGraph& graph) {
    std::ostringstream out;
    out << "{\n  \"nodes\": ";
    if (graph.node_info().empty()) {
        out << graph.node_count();
    } else {
        out << "[\n";
        for (std::size_t i = 0; i < graph.node_count(); ++i) {
            const NodeInfo& ni = graph.node_info()[i];
            out << "    {\"label\": " << json(ni.label).dump();
            if (ni.xy) out << ", \"xy\": [" << number((*ni.xy)[0]) << ", " << number((*ni.xy)[1]) << "]";
            out << "}" << (i + 1 < graph.node_count() ? "," : "") << "\n";
        }
        out << "  ]";
    }
    out << ",\n  \"risk_table\": {\n";
    std::size_t row = 0;
    for (const auto& [risk, probs] : graph.risk_table()) {
        out << "    \"" << to_string(risk) << "\": [" << number(probs.p_success()) << ", "
            << number(probs.p_retry()) << "]" << (++row < graph.risk_table().size() ? "," : "")
            << "\n";
    }
    out << "  },\n  \"edges\": [\n";
    const auto edges = graph.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        out << "    [" << e.a << ", " << e.b << ", " << number(e.distance) << ", \""
            << to_string(e.risk) << "\"]" << (i + 1 < edges.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

std::shared_ptr<const EnvironmentGraph> default_environment() {
    static const auto graph =
        std::make_shared<const EnvironmentGraph>(parse_environment(default_environment_json()));
    return graph;
}

MissionSpec parse_mission(std::string_view json_text, const EnvironmentGraph& graph) {
    const json doc = parse_json(json_text);
    reject_unknown(doc, "mission",
                   {"start", "tasks", "end", "safe_locations", "threshold", "hold_limit"});
    MissionSpec spec;
    const json& start = require(doc, "start", "mission");
    if (start.is_string()) {
        if (start.get<std::string>() != "random") fail("start", "expected a node id or \"random\"");
    } else {
        spec.start = as_node(start, "start");
    }
    spec.tasks = as_node_list(require(doc, "tasks", "mission"), "tasks");
    spec.end = as_node(require(doc, "end", "mission"), "end");
    if (auto it = doc.find("safe_locations"); it != doc.end())
        spec.safe_locations = as_node_list(*it, "safe_locations");
    if (auto it = doc.find("threshold"); it != doc.end())
        spec.threshold = as_number(*it, "threshold");
    if (auto it = doc.find("hold_limit"); it != doc.end()) {
        spec.hold_limit = as_u32(*it, "hold_limit");
    }
    spec.validate(graph);
    std::sort(spec.tasks.begin(), spec.tasks.end());
    return spec;
}

MissionSpec load_mission_file(const std::filesystem::path& path, const EnvironmentGraph& graph) {
    try {
        return parse_mission(read_text_file(path), graph);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) throw;
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

MissionSpec case_study_mission() {
    MissionSpec spec;
    spec.tasks = {3, 6, 9, 12, 16, 24, 29};
    spec.end = 22;
    spec.safe_locations = {13, 14, 20, 24};
    spec.threshold = 0.9;
    spec.hold_limit = 10;
    return spec;
}

SweepConfig parse_sweep_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    const json doc = parse_json(json_text);
    reject_unknown(doc, "config",
                   {"environment", "mission", "heat", "threshold", "hold_limit",
                    "redirect_after_holds", "max_steps", "levels", "episodes_per_level", "seed",
                    "workers"});
    SweepConfig cfg;

    const json& env = require(doc, "environment", "config");
    if (!env.is_string()) fail("environment", "expected a file path or \"default\"");
    if (env.get<std::string>() == "default")
        cfg.base.environment = default_environment();
    else
        cfg.base.environment = std::make_shared<const EnvironmentGraph>(
            load_environment_file(resolve(base_dir, env.get<std::string>())));

    const json& mission = require(doc, "mission", "config");
    if (!mission.is_string()) fail("mission", "expected a file path or \"case-study\"");
    if (mission.get<std::string>() == "case-study")
        cfg.base.mission = case_study_mission();
    else
        cfg.base.mission = load_mission_file(resolve(base_dir, mission.get<std::string>()),
                                             *cfg.base.environment);

    if (auto it = doc.find("heat"); it != doc.end()) {
        reject_unknown(*it, "heat", {"path_heat", "neighbor_heat", "neighbor_reach"});
        if (auto h = it->find("path_heat"); h != it->end())
            cfg.base.heat.path_heat = as_number(*h, "heat.path_heat");
        if (auto h = it->find("neighbor_heat"); h != it->end())
            cfg.base.heat.neighbor_heat = as_number(*h, "heat.neighbor_heat");
        if (auto h = it->find("neighbor_reach"); h != it->end())
            cfg.base.heat.neighbor_reach = as_u32(*h, "heat.neighbor_reach");
    }
    if (auto it = doc.find("threshold"); it != doc.end())
        cfg.base.mission.threshold = as_number(*it, "threshold");
    if (auto it = doc.find("hold_limit"); it != doc.end())
        cfg.base.mission.hold_limit = as_u32(*it, "hold_limit");
    if (auto it = doc.find("redirect_after_holds"); it != doc.end())
        cfg.base.redirect_after_holds = as_u32(*it, "redirect_after_holds");
    if (auto it = doc.find("max_steps"); it != doc.end())
        cfg.base.max_steps = as_count(*it, "max_steps");
    if (auto it = doc.find("levels"); it != doc.end()) {
        if (!it->is_array() || it->empty()) fail("levels", "expected a non-empty array");
        cfg.levels.clear();
        for (std::size_t i = 0; i < it->size(); ++i)
            cfg.levels.push_back(as_number((*it)[i], "levels[" + std::to_string(i) + "]"));
    }
    if (auto it = doc.find("episodes_per_level"); it != doc.end())
        cfg.episodes_per_level = as_count(*it, "episodes_per_level");
    if (auto it = doc.find("seed"); it != doc.end()) cfg.base.seed = as_count(*it, "seed");
    if (auto it = doc.find("workers"); it != doc.end()) cfg.workers = as_count(*it, "workers");

    for (double level : cfg.levels) {
        if (!(level >= 0.0 && level <= 1.0)) fail("levels", "uncertainty must lie in [0, 1]");
    }
    if (cfg.episodes_per_level == 0) fail("episodes_per_level", "must be at least 1");
    cfg.base.validate();
    return cfg;
}

SweepConfig load_sweep_config_file(const std::filesystem::path& path) {
    try {
        return parse_sweep_config(read_text_file(path), path.parent_path());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) throw;
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error(ErrorKind::Io, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorKind::Io, "cannot rename into " + path.string() + ": " + ec.message());
    }
}

}  // namespace riskpath
