#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "iotembed/cost_model.hpp"

using namespace iotembed;

TEST_CASE("latency table reproduces the M/M/1 anchors") {
    auto t = build_latency_table(250.0, 128.0, 25.0);
    // mu = 250 / 1.024 packets/s
    const double mu = 250.0 / 1.024;
    REQUIRE(mu == Catch::Approx(244.140625));
    // top level sits below capacity
    REQUIRE(t.max_rate() == Catch::Approx(225.0));
    // W(125 kb/s) = 1000/(mu - 125/1.024) = 8.192 ms
    REQUIRE(node_latency(t, 125.0) == Catch::Approx(8.192).epsilon(1e-12));
    // the empty-queue limit is the pure service time 1000/mu = 4.096 ms,
    // approached by the first level from above
    REQUIRE(node_latency(t, 25.0) > 4.096);
    REQUIRE(node_latency(t, 0.0) == 0.0);
}

TEST_CASE("latency lookup is a ceiling lookup and errors above the top level") {
    auto t = build_latency_table(250.0, 128.0, 25.0);
    REQUIRE(node_latency(t, 100.1) == node_latency(t, 125.0));
    REQUIRE(node_latency(t, 124.9) == node_latency(t, 125.0));
    REQUIRE_THROWS_AS(node_latency(t, 226.0), CapacityViolation);
    REQUIRE_THROWS_AS(node_latency(t, -1.0), std::invalid_argument);
}

TEST_CASE("latency lookup matches a linear-scan oracle on random rates") {
    auto t = build_latency_table(250.0, 128.0, 25.0);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        double rate = uniform01(rng) * t.max_rate();
        double oracle = 0.0;
        if (rate > 0) {
            oracle = -1.0;
            for (const auto& lv : t.levels)
                if (lv.lambda_kbps >= rate) {
                    oracle = lv.w_ms;
                    break;
                }
        }
        REQUIRE(node_latency(t, rate) == oracle);
    }
}

TEST_CASE("processing power matches the hand-evaluated profile") {
    IoTNode n = fixtures::make_node(0, 0, 0, 8.0, 8.0);  // MSP430F1-like row
    VirtualNode v;
    v.mcu_demand = 4.0;
    REQUIRE(processing_power(n, {v}) == Catch::Approx(5.0).margin(1e-9));
    REQUIRE(processing_power(n, {}) == 0.0);
    VirtualNode w = v;
    w.mcu_demand = 2.0;
    // additive in hosted demands on one shared idle term
    REQUIRE(processing_power(n, {v, w}) == Catch::Approx(1.0 + 4.0 + 2.0).margin(1e-9));
    VirtualNode big;
    big.mcu_demand = 9.0;
    REQUIRE_THROWS_AS(processing_power(n, {big}), CapacityViolation);
}

TEST_CASE("link power coefficient matches the radio model anchors") {
    IoTLink l{0, 1, 50.0, 0.05, 2.55e-4};
    REQUIRE(link_power_per_kbps(l) == Catch::Approx(0.7375).margin(1e-9));
    l.distance = 100.0;
    REQUIRE(link_power_per_kbps(l) == Catch::Approx(2.65).margin(1e-9));
}

TEST_CASE("network power adds idle terms once per active node") {
    auto net = fixtures::triangle_net();
    LinkTraffic t1{{{0, 1}, 10.0}};
    // 2 active endpoints at 1 mW idle + 10 kb/s * 0.7375 + d=60 amp term
    double coeff = link_power_per_kbps(net.link(0, 1));
    REQUIRE(network_power(net, t1, {}) == Catch::Approx(2.0 + 10.0 * coeff));
    // adding reverse traffic keeps the same active set
    LinkTraffic t2{{{1, 0}, 5.0}};
    REQUIRE(network_power(net, t1, t2) == Catch::Approx(2.0 + 15.0 * coeff));
    // zero-rate entries do not activate nodes
    REQUIRE(network_power(net, {{{0, 2}, 0.0}}, {}) == 0.0);
    REQUIRE_THROWS_AS(network_power(net, {{{0, 5}, 1.0}}, {}), std::invalid_argument);
}

TEST_CASE("hand example: single 50 m link at 10 kb/s costs 9.375 mW") {
    PhysicalNetwork net;
    net.area_width = net.area_height = 100.0;
    net.max_link_distance = 60.0;
    net.add_node(fixtures::make_node(0, 0, 0));
    net.add_node(fixtures::make_node(1, 50, 0));
    net.add_link(0, 1, 50.0, 0.05, 2.55e-4);
    REQUIRE(network_power(net, {{{0, 1}, 10.0}}, {}) ==
            Catch::Approx(9.375).margin(1e-9));
}

TEST_CASE("weighted objective combines the three totals") {
    ObjectiveWeights w;  // 30 / 1 / 1
    auto c = total_objective(w, 2.0, 5.0, 9.375);
    REQUIRE(c.objective == Catch::Approx(74.375).margin(1e-9));
    REQUIRE(c.tl_ms == 2.0);
    REQUIRE(c.tpp_mw == 5.0);
    REQUIRE(c.tnp_mw == 9.375);
}

TEST_CASE("latency table construction rejects bad steps") {
    REQUIRE_THROWS_AS(build_latency_table(250.0, 128.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(build_latency_table(250.0, 128.0, 250.0), std::invalid_argument);
}
