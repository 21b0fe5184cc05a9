#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "iotembed/checker.hpp"
#include "iotembed/exact_solver.hpp"
#include "reference.hpp"

using namespace iotembed;
using reference::brute_force_objective;

TEST_CASE("exact solver matches the brute-force reference on the triangle") {
    auto net = fixtures::triangle_net();
    auto req = fixtures::chain3();
    auto table = fixtures::default_table();
    ObjectiveWeights w;
    for (const char* name : {"CCNR", "CCNR+RDTR", "CCNR+RPTR", "CCNR+STR", "PRNR"}) {
        auto scheme = SchemeSpec::parse(name);
        auto result = solve_exact(net, req, scheme, w, table);
        auto oracle = brute_force_objective(net, req, scheme, w, table);
        INFO("scheme " << name);
        if (!oracle) {
            REQUIRE(result.status == SolveStatus::Infeasible);
            continue;
        }
        REQUIRE(result.status == SolveStatus::Optimal);
        REQUIRE(result.solution->costs.objective == Catch::Approx(*oracle).margin(1e-6));
    }
}

TEST_CASE("exact solutions pass the independent checker") {
    auto net = fixtures::diamond_net();
    auto req = fixtures::chain2();
    auto table = fixtures::default_table();
    for (const char* name : {"CCNR", "CCNR+STR", "FRNR"}) {
        auto scheme = SchemeSpec::parse(name);
        auto result = solve_exact(net, req, scheme, {}, table);
        REQUIRE(result.status == SolveStatus::Optimal);
        auto report = check_solution(net, req, scheme, *result.solution, {}, table);
        INFO("scheme " << name << ": "
                       << (report.first_failure() ? report.first_failure()->constraint +
                                                        ": " +
                                                        report.first_failure()->detail
                                                  : ""));
        REQUIRE(report.all_pass());
    }
}

TEST_CASE("exact solver is deterministic") {
    auto net = fixtures::triangle_net();
    auto req = fixtures::chain3();
    auto a = solve_exact(net, req, SchemeSpec::parse("CCNR+RPTR"), {},
                         fixtures::default_table());
    auto b = solve_exact(net, req, SchemeSpec::parse("CCNR+RPTR"), {},
                         fixtures::default_table());
    REQUIRE(a.solution->assignment == b.solution->assignment);
    REQUIRE(a.solution->routes1 == b.solution->routes1);
    REQUIRE(a.solution->routes2 == b.solution->routes2);
}

TEST_CASE("empty and zero-demand requests solve trivially") {
    auto net = fixtures::triangle_net();
    auto empty = solve_exact(net, {}, SchemeSpec::parse("CCNR"), {},
                             fixtures::default_table());
    REQUIRE(empty.status == SolveStatus::Optimal);
    REQUIRE(empty.solution->costs.objective == 0.0);

    auto req = fixtures::chain2(0.0);  // zero demand: placement cost only
    auto r = solve_exact(net, req, SchemeSpec::parse("CCNR"), {},
                         fixtures::default_table());
    REQUIRE(r.status == SolveStatus::Optimal);
    REQUIRE(r.solution->costs.tnp_mw == 0.0);
    REQUIRE(r.solution->costs.tl_ms == 0.0);
    REQUIRE(r.solution->costs.tpp_mw > 0.0);
}

TEST_CASE("dual-path schemes on a tree are infeasible with a (27) hint") {
    // Every node pair on a line has exactly one simple path, so no
    // assignment admits a link-disjoint pair.
    auto net = fixtures::line_net();
    auto req = fixtures::chain2();
    auto result = solve_exact(net, req, SchemeSpec::parse("CCNR+RPTR"), {},
                              fixtures::default_table());
    REQUIRE(result.status == SolveStatus::Infeasible);
    REQUIRE(result.hint.find("(27)") != std::string::npos);
}

TEST_CASE("impossible function requirement is infeasible with a node hint") {
    auto net = fixtures::triangle_net();
    auto req = fixtures::chain2();
    req.bps[0].vnodes[1].required_function = "teleport";
    auto result = solve_exact(net, req, SchemeSpec::parse("CCNR"), {},
                              fixtures::default_table());
    REQUIRE(result.status == SolveStatus::Infeasible);
    REQUIRE(result.hint.find("(9)-(14)") != std::string::npos);
}
