#include <doctest.h>

#include <random>
#include <string>

#include "oracles.hpp"
#include "riskpath/env.hpp"
#include "riskpath/error.hpp"
#include "riskpath/io.hpp"

using namespace riskpath;

namespace {

std::string error_of(const std::string& doc) {
    try {
        parse_environment(doc);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("effective_success examples") {
    CHECK(effective_success(OutcomeProbs::make(1.0, 0.0)) == 1.0);
    // Three-state chain {at node, arrived, dead}: x = 0.9 + 0.05 x.
    const double x = 0.90 / (1.0 - 0.05);
    CHECK(effective_success(OutcomeProbs::make(0.90, 0.05)) == doctest::Approx(x).epsilon(1e-15));
    CHECK(effective_success(OutcomeProbs::make(0.90, 0.05)) ==
          doctest::Approx(0.947368421052631).epsilon(1e-12));
    CHECK(effective_success(OutcomeProbs::make(0.5, 0.5)) == 1.0);
}

TEST_CASE("OutcomeProbs validation") {
    CHECK_THROWS_AS(OutcomeProbs::make(0.0, 0.5), Error);
    CHECK_THROWS_AS(OutcomeProbs::make(0.6, 0.5), Error);
    CHECK_THROWS_AS(OutcomeProbs::make(0.5, -0.1), Error);
    const auto p = OutcomeProbs::make(0.95, 0.045);
    CHECK(p.p_success() + p.p_retry() + p.p_fail() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.p_fail() == doctest::Approx(0.005).epsilon(1e-9));
}

TEST_CASE("default risk table rows") {
    const RiskTable& t = default_risk_table();
    REQUIRE(t.size() == 4);
    CHECK(t.at(RiskClass::Low) == OutcomeProbs::make(0.999, 0.0009));
    CHECK(t.at(RiskClass::Medium) == OutcomeProbs::make(0.99, 0.009));
    CHECK(t.at(RiskClass::High) == OutcomeProbs::make(0.95, 0.045));
    CHECK(t.at(RiskClass::Severe) == OutcomeProbs::make(0.90, 0.09));
    for (const auto& [cls, p] : t) {
        CHECK(p.p_success() + p.p_retry() + p.p_fail() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(effective_success(p) >= 0.9);
    }
}

TEST_CASE("default environment") {
    const auto g = default_environment();
    CHECK(g->node_count() == 30);
    CHECK(g->edge_count() == 48);
    for (NodeId n = 0; n < g->node_count(); ++n) {
        CHECK_FALSE(g->neighbors(n).empty());
        for (const Neighbor& nb : g->neighbors(n)) CHECK(g->edge(nb.edge).touches(n));
    }
}

TEST_CASE("triangle document round trip") {
    const std::string doc = R"({
        "nodes": 3,
        "risk_table": {"Low": [0.99, 0.009]},
        "edges": [[0, 1, 1.0, "Low"], [1, 2, 2.0, "Low"], [2, 0, 1.5, "Low"]]
    })";
    const EnvironmentGraph g = parse_environment(doc);
    CHECK(g.node_count() == 3);
    REQUIRE(g.edge_count() == 3);
    for (const Edge& e : g.edges()) {
        CHECK(e.risk == RiskClass::Low);
        CHECK(e.a < e.b);
        const auto& p = g.edge_probs(*g.find_edge(e.a, e.b));
        CHECK(p.p_success() == 0.99);
        CHECK(p.p_retry() == 0.009);
        CHECK(p.p_fail() == doctest::Approx(0.001).epsilon(1e-9));
    }
    CHECK(g.edge(*g.find_edge(0, 2)).distance == 1.5);
    CHECK(g.edge(*g.find_edge(2, 1)).distance == 2.0);
    CHECK(g.risk_table().size() == 1);
    CHECK(parse_environment(save_environment(g)) == g);
}

TEST_CASE("neighbors ordering and edge cases") {
    const EnvironmentGraph tri(3, {{0, 2, 1.0, RiskClass::Low}, {1, 0, 1.0, RiskClass::Low},
                                   {1, 2, 1.0, RiskClass::Low}},
                               default_risk_table());
    const auto nb = tri.neighbors(0);
    REQUIRE(nb.size() == 2);
    CHECK(nb[0].node == 1);
    CHECK(nb[0].edge == *tri.find_edge(0, 1));
    CHECK(nb[1].node == 2);
    CHECK(nb[1].edge == *tri.find_edge(0, 2));

    const EnvironmentGraph single(1, {}, default_risk_table());
    CHECK(single.neighbors(0).empty());
    CHECK_THROWS_AS(single.neighbors(1), Error);
}

TEST_CASE("environment validation errors name the element") {
    CHECK(error_of(R"({"nodes": 2, "edges": [[0, 0, 1.0, "Low"]]})").find("self-loop edge") !=
          std::string::npos);
    CHECK(error_of(R"({"nodes": 2, "edges": [[0, 5, 1.0, "Low"]]})").find("5") !=
          std::string::npos);
    CHECK(error_of(R"({"nodes": 2, "edges": [[0, 1, 1.0, "Low"], [1, 0, 2.0, "Low"]]})")
              .find("duplicate edge") != std::string::npos);
    CHECK(error_of(R"({"nodes": 2, "risk_table": {"Low": [0.9, 0.05]},
                       "edges": [[0, 1, 1.0, "High"]]})")
              .find("High") != std::string::npos);
    CHECK(error_of(R"({"nodes": 2, "risk_table": {"Low": [0.9, 0.2]},
                       "edges": [[0, 1, 1.0, "Low"]]})")
              .find("Low") != std::string::npos);
    CHECK(error_of(R"({"nodes": 2, "risk_table": {"Low": [0.0, 0.2]},
                       "edges": [[0, 1, 1.0, "Low"]]})") != "");
    CHECK(error_of(R"({"nodes": 2, "edges": [[0, 1, 0.0, "Low"]]})") != "");
    CHECK(error_of(R"({"nodes": 2, "edges": [[0, 1, 1.0, "Purple"]]})").find("Purple") !=
          std::string::npos);
    CHECK(error_of(R"({"nodes": 2, "edges": [], "colour": 1})").find("colour") !=
          std::string::npos);
    CHECK(error_of(R"({"edges": []})").find("nodes") != std::string::npos);
    CHECK(error_of("{not json") != "");
    CHECK(error_of(R"({"nodes": 0, "edges": []})") != "");
}

TEST_CASE("labelled node array") {
    const std::string doc = R"({
        "nodes": [{"label": "hall", "xy": [0, 0]}, {"label": "kitchen"}],
        "edges": [[0, 1, 2.5, "Medium"]]
    })";
    const EnvironmentGraph g = parse_environment(doc);
    CHECK(g.node_count() == 2);
    REQUIRE(g.node_info().size() == 2);
    CHECK(g.node_info()[0].label == "hall");
    CHECK(g.node_info()[0].xy.has_value());
    CHECK_FALSE(g.node_info()[1].xy.has_value());
    CHECK(g.risk_table() == default_risk_table());
    CHECK(parse_environment(save_environment(g)) == g);
}

TEST_CASE("property: save/load round trip and neighbor symmetry") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 12;
        const EnvironmentGraph g = oracle::random_graph(rng, n, 0.3);
        REQUIRE(parse_environment(save_environment(g)) == g);
        for (NodeId a = 0; a < n; ++a) {
            const auto nbs = g.neighbors(a);
            for (std::size_t i = 1; i < nbs.size(); ++i) REQUIRE(nbs[i - 1].node < nbs[i].node);
            for (const Neighbor& nb : nbs) {
                bool back = false;
                for (const Neighbor& m : g.neighbors(nb.node))
                    back = back || (m.node == a && m.edge == nb.edge);
                REQUIRE(back);
            }
        }
    }
}

TEST_CASE("property: effective_success monotone in p_success at fixed p_fail") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double pf = 0.5 * u(rng);
        const double ps1 = 1e-3 + (1.0 - pf - 1e-3) * u(rng);
        const double ps2 = 1e-3 + (1.0 - pf - 1e-3) * u(rng);
        const double lo = std::min(ps1, ps2), hi = std::max(ps1, ps2);
        const auto a = OutcomeProbs::make(lo, 1.0 - pf - lo);
        const auto b = OutcomeProbs::make(hi, 1.0 - pf - hi);
        REQUIRE(effective_success(a) <= effective_success(b) + 1e-15);
    }
}
