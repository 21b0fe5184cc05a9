// Acceptance gate: one property per criterion, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "iotembed/checker.hpp"
#include "iotembed/exact_solver.hpp"
#include "iotembed/failure_sim.hpp"
#include "iotembed/heuristic.hpp"
#include "iotembed/milp.hpp"
#include "reference.hpp"

using namespace iotembed;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    if (!ok) ++failures;
}

struct Tiny {
    PhysicalNetwork net;
    ServiceRequest req;
};

/// 4-node fully linked desk-scale scenario; `two_vnodes` keeps the
/// request small enough for the duplicating node schemes.
Tiny tiny_scenario(std::uint64_t seed, bool two_vnodes) {
    Tiny t;
    t.net = generate_topology(seed, 4, 120, 120, 200);
    ServiceGenConfig cfg;
    cfg.n_bps = 1;
    cfg.vnodes_per_bp = two_vnodes ? 2 : 3;
    t.req = generate_services(seed, cfg);
    return t;
}

const std::vector<std::string> kOracleSchemes = {"CCNR",      "CCNR+RDTR", "CCNR+RPTR",
                                                 "CCNR+STR",  "PRNR+STR",  "FRNR"};

bool needs_small_request(const std::string& scheme) {
    return scheme.rfind("CCNR", 0) != 0;  // duplication grows the request
}

/// 30-node scenario with retry over seeds (the generator rejects
/// disconnected draws). Returns the seed actually used.
std::uint64_t medium_scenario(std::uint64_t start_seed, PhysicalNetwork& net,
                              ServiceRequest& req) {
    for (std::uint64_t s = start_seed;; ++s) {
        try {
            net = generate_topology(s, 30, 500, 500, 100);
        } catch (const TopologyError&) {
            continue;
        }
        ServiceGenConfig cfg;
        cfg.n_bps = 3;
        req = generate_services(s, cfg);
        return s;
    }
}

// --- criterion 1: oracle equivalence ------------------------------------

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    int checked = 0, mismatched = 0;
    for (const auto& name : kOracleSchemes) {
        auto scheme = SchemeSpec::parse(name);
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            auto tiny = tiny_scenario(seed, needs_small_request(name));
            auto exact = solve_exact(tiny.net, tiny.req, scheme, {},
                                     fixtures::default_table());
            auto oracle = reference::brute_force_objective(
                tiny.net, tiny.req, scheme, {}, fixtures::default_table());
            ++checked;
            if (oracle.has_value() != (exact.status == SolveStatus::Optimal)) {
                ++mismatched;
                continue;
            }
            if (oracle &&
                std::abs(exact.solution->costs.objective - *oracle) > 1e-6)
                ++mismatched;
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    report(1, mismatched == 0 && secs < 300.0,
           "oracle equivalence on " + std::to_string(checked) + " scenarios, " +
               std::to_string(mismatched) + " mismatches, " + std::to_string(secs) +
               " s");
}

// --- criterion 2: verifier soundness ------------------------------------

void criterion2() {
    int solved = 0, check_failures = 0, tamper_misses = 0;
    auto table = fixtures::default_table();
    for (const auto& name : kOracleSchemes) {
        auto scheme = SchemeSpec::parse(name);
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            auto tiny = tiny_scenario(seed, needs_small_request(name));
            auto inst = compile(tiny.net, tiny.req, scheme, {}, table);
            inst.validate();
            auto r = solve_exact(tiny.net, tiny.req, scheme, {}, table);
            if (r.status != SolveStatus::Optimal) continue;
            ++solved;
            auto report_ok =
                check_solution(tiny.net, tiny.req, scheme, *r.solution, {}, table);
            if (!report_ok.all_pass()) ++check_failures;

            if (seed > 5) continue;  // tampering probes on a sample per scheme
            auto fails_family = [&](const EmbeddingSolution& s, const char* needle) {
                auto rep = check_solution(tiny.net, tiny.req, scheme, s, {}, table);
                for (const auto& c : rep.checks)
                    if (!c.pass && c.constraint.find(needle) != std::string::npos)
                        return true;
                return false;
            };
            {  // collapse two vnodes of one BP onto one node -> (6)
                auto s = *r.solution;
                auto it = s.assignment.begin();
                auto jt = std::next(it);
                if (jt != s.assignment.end() && it->first.first == jt->first.first) {
                    jt->second = it->second;
                    if (!fails_family(s, "(6)")) ++tamper_misses;
                }
            }
            if (!r.solution->routes1.empty()) {  // break a route -> flow family
                auto s = *r.solution;
                s.routes1.begin()->second.back() = s.routes1.begin()->second.front();
                if (!fails_family(s, "flow conservation")) ++tamper_misses;
            }
            if (scheme.dual_path() && !r.solution->routes2.empty()) {  // overlap -> (27)
                auto s = *r.solution;
                auto cd = s.routes1.begin()->first;
                if (s.routes2.count(cd)) {
                    s.routes2[cd] = s.routes1.at(cd);
                    if (!fails_family(s, "(27)")) ++tamper_misses;
                }
            }
            {  // inflate traffic -> (18)
                auto s = *r.solution;
                if (!s.link_traffic1.empty()) {
                    s.link_traffic1.begin()->second += 7.0;
                    if (!fails_family(s, "(18)")) ++tamper_misses;
                }
            }
        }
    }
    report(2, solved >= 500 && check_failures == 0 && tamper_misses == 0,
           "solve+check all-pass on " + std::to_string(solved) + " scenarios (" +
               std::to_string(check_failures) + " check failures, " +
               std::to_string(tamper_misses) + " undetected tampers)");
}

// --- criterion 3: cost-model identities ---------------------------------

void criterion3() {
    bool ok = true;
    IoTNode msp = fixtures::make_node(0, 0, 0, 8.0, 8.0);
    VirtualNode v;
    v.mcu_demand = 4.0;
    ok &= std::abs(processing_power(msp, {v}) - 5.0) <= 1e-9;

    IoTLink l{0, 1, 50.0, 0.05, 2.55e-4};
    ok &= std::abs(link_power_per_kbps(l) - 0.7375) <= 1e-9;
    l.distance = 100.0;
    ok &= std::abs(link_power_per_kbps(l) - 2.65) <= 1e-9;

    PhysicalNetwork net;
    net.area_width = net.area_height = 100.0;
    net.max_link_distance = 60.0;
    net.add_node(fixtures::make_node(0, 0, 0));
    net.add_node(fixtures::make_node(1, 50, 0));
    net.add_link(0, 1, 50.0, 0.05, 2.55e-4);
    ok &= std::abs(network_power(net, {{{0, 1}, 10.0}}, {}) - 9.375) <= 1e-9;

    auto table = fixtures::default_table();
    std::mt19937_64 rng(2026);
    int scan_mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        double rate = uniform01(rng) * table.max_rate();
        double oracle = 0.0;
        if (rate > 0) {
            oracle = -1.0;
            for (const auto& lv : table.levels)
                if (lv.lambda_kbps >= rate) {
                    oracle = lv.w_ms;
                    break;
                }
        }
        if (node_latency(table, rate) != oracle) ++scan_mismatches;
    }
    ok &= scan_mismatches == 0;
    report(3, ok,
           "Eq.(3)/Eq.(4) hand examples and latency scan (" +
               std::to_string(scan_mismatches) + " scan mismatches)");
}

// --- criteria 4 & 6: 30-node energy / latency trends --------------------

void criteria4and6() {
    auto table = fixtures::default_table();
    int runs = 0, energy_ok = 0;
    double tl_rdtr = 0, tl_rptr = 0, tl_str = 0;
    std::uint64_t seed = 1;
    while (runs < 20) {
        PhysicalNetwork net;
        ServiceRequest req;
        seed = medium_scenario(seed, net, req) + 1;
        try {
            std::map<std::string, EmbeddingSolution> sols;
            for (const char* name : {"CCNR+RDTR", "CCNR+RPTR", "CCNR+STR"})
                sols[name] = embed_greedy(net, req, SchemeSpec::parse(name), {}, table);
            auto energy = [&](const char* name) {
                return evaluate_no_failure(net, req, SchemeSpec::parse(name),
                                           sols.at(name), table)
                    .energy_mw;
            };
            double e_rdtr = energy("CCNR+RDTR");
            double e_rptr = energy("CCNR+RPTR");
            double e_str = energy("CCNR+STR");
            if (e_rptr >= e_rdtr - 1e-9 && e_rptr >= e_str - 1e-9) ++energy_ok;
            // Latency trend is a controlled comparison: evaluate each
            // mode's traffic scaling on one shared dual-path embedding so
            // routing differences do not mask the rate effect.
            auto tl_of = [&](const char* name) {
                auto scheme = SchemeSpec::parse(name);
                EmbeddingSolution s = sols.at("CCNR+RPTR");
                derive_solution_traffic(s, req, scheme);
                double tl = 0.0;
                for (const auto& [n, rate] : s.node_arrivals)
                    tl += node_latency(table, rate);
                return tl;
            };
            tl_rdtr += tl_of("CCNR+RDTR");
            tl_rptr += tl_of("CCNR+RPTR");
            tl_str += tl_of("CCNR+STR");
            ++runs;
        } catch (const EmbedError&) {
            continue;  // this draw admits no dual-path embedding; next seed
        } catch (const CapacityViolation&) {
            continue;
        }
    }
    report(4, energy_ok >= 19,
           "E(RPTR) >= E(RDTR), E(STR) in " + std::to_string(energy_ok) + "/20 runs");
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "mean TL: STR %.3f < RDTR %.3f and RPTR %.3f ms (ratios %.2f, %.2f)",
                  tl_str / 20, tl_rdtr / 20, tl_rptr / 20, tl_str / tl_rdtr,
                  tl_str / tl_rptr);
    report(6, tl_str < tl_rdtr && tl_str < tl_rptr, buf);
}

// --- criterion 5: failure trend -----------------------------------------

void criterion5() {
    auto table = fixtures::default_table();
    int runs = 0, rdtr_eq = 0, str_lt = 0;
    for (std::uint64_t seed = 1; runs < 20; ++seed) {
        auto tiny = tiny_scenario(seed, true);  // single-commodity request
        auto base = SchemeSpec::parse("CCNR+RPTR");
        auto r = solve_exact(tiny.net, tiny.req, base, {}, table);
        if (r.status != SolveStatus::Optimal) continue;
        const auto& sol = *r.solution;
        if (sol.routes1.empty()) continue;
        DirectedLink failed{sol.routes1.begin()->second[0],
                            sol.routes1.begin()->second[1]};

        auto with_mode = [&](const char* name) {
            auto scheme = SchemeSpec::parse(name);
            scheme.keep_alive_fraction = 0.0;
            EmbeddingSolution s = sol;  // identical routes for every mode
            derive_solution_traffic(s, tiny.req, scheme);
            return std::make_pair(scheme, s);
        };
        auto [rptr, s_rptr] = with_mode("CCNR+RPTR");
        auto [rdtr, s_rdtr] = with_mode("CCNR+RDTR");
        auto [strm, s_str] = with_mode("CCNR+STR");

        double e_rptr_base =
            evaluate_no_failure(tiny.net, tiny.req, rptr, s_rptr, table).energy_mw;
        double e_rdtr_fail =
            evaluate_failure(tiny.net, tiny.req, rdtr, s_rdtr, table, failed, 0.0)
                .energy_mw;
        double e_str_fail =
            evaluate_failure(tiny.net, tiny.req, strm, s_str, table, failed, 0.0)
                .energy_mw;
        if (e_rdtr_fail == e_rptr_base) ++rdtr_eq;
        if (e_str_fail < e_rdtr_fail) ++str_lt;
        ++runs;
    }
    report(5, rdtr_eq == runs && str_lt == runs,
           "f=0, keep_alive=0: RDTR-fail == RPTR-base in " + std::to_string(rdtr_eq) +
               "/" + std::to_string(runs) + ", STR-fail < RDTR-fail in " +
               std::to_string(str_lt) + "/" + std::to_string(runs));
}

// --- criterion 7: PDR crossover -----------------------------------------

void criterion7() {
    // Hand-built diamond: per-unit path costs 1.4 and 1.6, keep-alive
    // 0.05, analytic crossover p* = 2*ka*e2/(e2-e1) = 0.8.
    auto net = fixtures::diamond_net();
    auto req = fixtures::chain2(10.0);
    auto scheme = SchemeSpec::parse("CCNR+RDTR");
    scheme.keep_alive_fraction = 0.05;
    EmbeddingSolution sol;
    sol.assignment[{"bp0", "v0"}] = 0;
    sol.assignment[{"bp0", "v1"}] = 3;
    sol.routes1[{0, 3}] = {0, 1, 3};
    sol.routes2[{0, 3}] = {0, 2, 3};
    derive_solution_traffic(sol, req, scheme);

    auto diff_at = [&](double p) {
        auto r = pdr_sweep(net, req, scheme, sol, {p})[0];
        return r.e_rdtr - r.e_str;
    };
    double d1 = diff_at(0.7), d2 = diff_at(0.9);
    double crossing = 0.7 + 0.2 * d1 / (d1 - d2);  // both curves linear in p
    bool ok = std::abs(crossing - 0.8) <= 1e-6 && d1 > 0.0;
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "crossover %.9f vs analytic 0.8; E_STR < E_RDTR at p=0.7: %s",
                  crossing, d1 > 0.0 ? "yes" : "no");
    report(7, ok, buf);
}

// --- criterion 8: node-scheme ordering ----------------------------------

void criterion8() {
    auto table = fixtures::default_table();
    int runs = 0, ordered = 0;
    for (std::uint64_t seed = 1; runs < 10; ++seed) {
        auto tiny = tiny_scenario(seed, true);
        double obj[3];
        bool all = true;
        const char* names[3] = {"CCNR", "PRNR", "FRNR"};
        for (int i = 0; i < 3; ++i) {
            auto r = solve_exact(tiny.net, tiny.req, SchemeSpec::parse(names[i]), {},
                                 table);
            if (r.status != SolveStatus::Optimal) {
                all = false;
                break;
            }
            obj[i] = r.solution->costs.objective;
        }
        if (!all) continue;
        ++runs;
        if (obj[2] >= obj[1] - 1e-9 && obj[1] >= obj[0] - 1e-9) ++ordered;
    }
    report(8, ordered == runs,
           "objective(FRNR) >= objective(PRNR) >= objective(CCNR) in " +
               std::to_string(ordered) + "/" + std::to_string(runs) + " instances");
}

// --- criterion 9: STR flow invariant ------------------------------------

void criterion9() {
    auto table = fixtures::default_table();
    int runs = 0, bad_flow = 0, bad_resend = 0;
    for (std::uint64_t seed = 1; runs < 20; ++seed) {
        auto tiny = tiny_scenario(seed, true);  // single commodity
        auto scheme = SchemeSpec::parse("CCNR+STR");
        auto r = solve_exact(tiny.net, tiny.req, scheme, {}, table);
        if (r.status != SolveStatus::Optimal) continue;
        ++runs;
        double demand = tiny.req.bps[0].vlinks[0].traffic_demand;
        for (const auto* tm : {&r.solution->link_traffic1, &r.solution->link_traffic2})
            for (const auto& [link, kbps] : *tm)
                if (kbps != 0.5 * demand) ++bad_flow;
        // the failure-time resend on the survivor is bounded by half the
        // demand for every failure timing
        for (double f : {0.0, 0.3, 0.7, 1.0}) {
            auto scales = sim_detail::commodity_scales(TrafficMode::STR, 0.0, true,
                                                       false, f);
            if (scales.secondary - 0.5 > 0.5 + 1e-12) ++bad_resend;
        }
    }
    report(9, bad_flow == 0 && bad_resend == 0,
           "per-path STR flow == 0.5*demand on " + std::to_string(runs) +
               " solutions; resend bounded by 0.5*demand");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criteria4and6();
    criterion5();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%s (%d criteria failed)\n", failures == 0 ? "ALL PASS" : "FAILED",
                failures);
    return failures;
}
