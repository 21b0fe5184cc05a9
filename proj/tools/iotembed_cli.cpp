// Batch front door: scenario generation, solving, checking, failure
// simulation and LP export.
//
// Exit codes: 0 success, 2 usage/input error, 3 infeasible, 4 limits
// exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "iotembed/checker.hpp"
#include "iotembed/domain.hpp"
#include "iotembed/exact_solver.hpp"
#include "iotembed/failure_sim.hpp"
#include "iotembed/heuristic.hpp"
#include "iotembed/milp.hpp"
#include "iotembed/scenario_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kInfeasible = 3;
constexpr int kLimits = 4;

constexpr double kDefaultStepKbps = 25.0;
constexpr double kDefaultPacketBytes = 128.0;
constexpr double kDefaultCapacityKbps = 250.0;

iotembed::LatencyTable effective_table(const iotembed::Scenario& sc, double step) {
    if (sc.latency_table) return *sc.latency_table;
    double cap = kDefaultCapacityKbps;
    for (const auto& n : sc.network.nodes()) cap = std::min(cap, n.traffic_capacity);
    return iotembed::build_latency_table(cap, kDefaultPacketBytes, step);
}

void print_breakdown(const iotembed::CostBreakdown& c) {
    std::printf("TL  = %.6f ms\nTPP = %.6f mW\nTNP = %.6f mW\nobjective = %.6f\n", c.tl_ms,
                c.tpp_mw, c.tnp_mw, c.objective);
}

void append_cost_csv(const std::string& path, const std::string& scenario_id,
                     const std::string& scheme, const iotembed::CostBreakdown& c) {
    bool fresh = !std::ifstream(path).good();
    std::ofstream out(path, std::ios::app);
    if (fresh) out << "scenario_id,scheme,TL_ms,TPP_mW,TNP_mW,objective\n";
    out << scenario_id << "," << scheme << "," << c.tl_ms << "," << c.tpp_mw << ","
        << c.tnp_mw << "," << c.objective << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace iotembed;
    CLI::App app{"Resilient IoT service embedding toolkit"};
    app.require_subcommand(1);

    // --- generate -------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "Generate a random scenario file");
    std::uint64_t g_seed = 1;
    int g_nodes = 30, g_bps = 0, g_vnodes = 3;
    std::vector<double> g_area{500.0, 500.0};
    double g_maxdist = 100.0, g_dmin = 30.0, g_dmax = 60.0;
    std::string g_out = "scenario.json";
    gen->add_option("--seed", g_seed, "Random seed");
    gen->add_option("--nodes", g_nodes, "Number of IoT nodes");
    gen->add_option("--area", g_area, "Deployment area width height (m)")->expected(2);
    gen->add_option("--max-dist", g_maxdist, "Maximum link distance (m)");
    gen->add_option("--bps", g_bps, "Business processes to generate");
    gen->add_option("--vnodes-per-bp", g_vnodes, "Virtual nodes per BP (2 or 3)");
    gen->add_option("--demand-min", g_dmin, "Minimum virtual link demand (kb/s)");
    gen->add_option("--demand-max", g_dmax, "Maximum virtual link demand (kb/s)");
    gen->add_option("--out", g_out, "Output scenario path");

    // --- solve ----------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "Embed a scenario and emit the solution");
    std::string s_scenario, s_scheme = "CCNR", s_solver = "exact", s_out = "solution.json",
                s_csv;
    double s_alpha = 30.0, s_beta = 1.0, s_gamma = 1.0, s_keepalive = 0.01,
           s_time_limit = 300.0, s_step = kDefaultStepKbps;
    std::uint64_t s_seed = 1;
    int s_threads = 1, s_budget = 20;
    solve->add_option("--scenario", s_scenario, "Scenario JSON path")->required();
    solve->add_option("--scheme", s_scheme, "Scheme, e.g. CCNR, FRNR+STR, PRNR+RDTR");
    solve->add_option("--solver", s_solver, "exact | heuristic");
    solve->add_option("--alpha", s_alpha, "Latency weight (1/ms)");
    solve->add_option("--beta", s_beta, "Processing power weight (1/mW)");
    solve->add_option("--gamma", s_gamma, "Network power weight (1/mW)");
    solve->add_option("--keep-alive", s_keepalive, "RDTR keep-alive fraction of demand");
    solve->add_option("--seed", s_seed, "Heuristic seed");
    solve->add_option("--threads", s_threads, "Worker threads (results are thread-count independent)");
    solve->add_option("--time-limit", s_time_limit, "Exact solver time limit (s)");
    solve->add_option("--step", s_step, "Latency table step (kb/s)");
    solve->add_option("--local-search", s_budget, "Heuristic local search budget");
    solve->add_option("--out", s_out, "Solution JSON path");
    solve->add_option("--csv", s_csv, "Append a cost row to this CSV");

    // --- check ----------------------------------------------------------
    auto* check = app.add_subcommand("check", "Verify a solution against a scenario");
    std::string c_scenario, c_scheme = "CCNR", c_solution;
    double c_alpha = 30.0, c_beta = 1.0, c_gamma = 1.0, c_keepalive = 0.01,
           c_step = kDefaultStepKbps;
    check->add_option("--scenario", c_scenario, "Scenario JSON path")->required();
    check->add_option("--scheme", c_scheme, "Scheme name");
    check->add_option("--solution", c_solution, "Solution JSON path")->required();
    check->add_option("--alpha", c_alpha, "Latency weight");
    check->add_option("--beta", c_beta, "Processing power weight");
    check->add_option("--gamma", c_gamma, "Network power weight");
    check->add_option("--keep-alive", c_keepalive, "RDTR keep-alive fraction");
    check->add_option("--step", c_step, "Latency table step (kb/s)");

    // --- simulate -------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Failure / PDR evaluation of a solution");
    std::string m_scenario, m_scheme = "CCNR+RDTR", m_solution, m_out;
    std::vector<int> m_fail;
    std::vector<double> m_pdr;
    double m_fraction = 0.0, m_keepalive = 0.01, m_step = kDefaultStepKbps;
    sim->add_option("--scenario", m_scenario, "Scenario JSON path")->required();
    sim->add_option("--scheme", m_scheme, "Scheme name");
    sim->add_option("--solution", m_solution, "Solution JSON path")->required();
    sim->add_option("--fail-link", m_fail, "Failed directed link: FROM TO")->expected(2);
    sim->add_option("--fraction", m_fraction, "Fraction delivered before the failure");
    sim->add_option("--sweep-pdr", m_pdr, "PDR values to sweep")->expected(-1);
    sim->add_option("--keep-alive", m_keepalive, "RDTR keep-alive fraction");
    sim->add_option("--step", m_step, "Latency table step (kb/s)");
    sim->add_option("--out", m_out, "CSV output path (stdout when omitted)");

    // --- emit-lp --------------------------------------------------------
    auto* emit = app.add_subcommand("emit-lp", "Export the MILP in LP format");
    std::string e_scenario, e_scheme = "CCNR", e_out = "model.lp";
    double e_alpha = 30.0, e_beta = 1.0, e_gamma = 1.0, e_keepalive = 0.01,
           e_step = kDefaultStepKbps;
    emit->add_option("--scenario", e_scenario, "Scenario JSON path")->required();
    emit->add_option("--scheme", e_scheme, "Scheme name");
    emit->add_option("--alpha", e_alpha, "Latency weight");
    emit->add_option("--beta", e_beta, "Processing power weight");
    emit->add_option("--gamma", e_gamma, "Network power weight");
    emit->add_option("--keep-alive", e_keepalive, "RDTR keep-alive fraction");
    emit->add_option("--step", e_step, "Latency table step (kb/s)");
    emit->add_option("--out", e_out, "LP output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (gen->parsed()) {
            if (g_nodes < 2) {
                std::cerr << "error: --nodes must be >= 2\n";
                return kUsage;
            }
            Scenario sc;
            try {
                sc.network = generate_topology(g_seed, g_nodes, g_area[0], g_area[1],
                                               g_maxdist);
            } catch (const TopologyError& e) {
                std::cerr << "generation failed: " << e.what() << "\n";
                return kUsage;
            }
            ServiceGenConfig cfg;
            cfg.n_bps = g_bps;
            cfg.vnodes_per_bp = g_vnodes;
            cfg.demand_min = g_dmin;
            cfg.demand_max = g_dmax;
            sc.services = generate_services(g_seed, cfg);
            auto report = validate_scenario(sc.network, sc.services);
            if (!report.empty()) {
                std::cerr << "generated scenario failed validation: " << report.front().path
                          << ": " << report.front().message << "\n";
                return kUsage;
            }
            write_text_file(g_out, scenario_to_text(sc));
            std::cout << "wrote " << g_out << " (" << sc.network.nodes().size() << " nodes, "
                      << sc.network.links().size() / 2 << " bidirectional links)\n";
            return kOk;
        }

        if (solve->parsed()) {
            auto sc = load_scenario_file(s_scenario);
            auto violations = validate_scenario(sc.network, sc.services);
            if (!violations.empty()) {
                std::cerr << "invalid scenario: " << violations.front().path << ": "
                          << violations.front().message << "\n";
                return kUsage;
            }
            SchemeSpec scheme = SchemeSpec::parse(s_scheme);
            scheme.keep_alive_fraction = s_keepalive;
            ObjectiveWeights weights{s_alpha, s_beta, s_gamma};
            auto table = effective_table(sc, s_step);

            EmbeddingSolution sol;
            if (s_solver == "exact") {
                SolveLimits limits;
                limits.time_limit_s = s_time_limit;
                auto result = solve_exact(sc.network, sc.services, scheme, weights, table,
                                          limits);
                if (result.status == SolveStatus::Infeasible) {
                    std::cerr << "infeasible: " << result.hint << "\n";
                    return kInfeasible;
                }
                if (result.status == SolveStatus::LimitExceeded && !result.solution) {
                    std::cerr << "limits exceeded without an incumbent\n";
                    return kLimits;
                }
                sol = *result.solution;
                if (result.status == SolveStatus::LimitExceeded)
                    std::cerr << "warning: " << result.hint << " (not proven optimal)\n";
            } else if (s_solver == "heuristic") {
                HeuristicConfig cfg;
                cfg.seed = s_seed;
                cfg.local_search_budget = s_budget;
                try {
                    sol = embed_greedy(sc.network, sc.services, scheme, weights, table, cfg);
                    sol = local_search(sc.network, sc.services, scheme, weights, table, sol,
                                       cfg.local_search_budget, cfg.k_candidate_paths);
                } catch (const EmbedError& e) {
                    std::cerr << "infeasible: " << e.what() << "\n";
                    return kInfeasible;
                }
            } else {
                std::cerr << "error: unknown solver \"" << s_solver << "\"\n";
                return kUsage;
            }

            auto report = check_solution(sc.network, sc.services, scheme, sol, weights, table);
            if (!report.all_pass()) {
                const auto* f = report.first_failure();
                std::cerr << "internal error: solver output failed verification: "
                          << f->constraint << ": " << f->detail << "\n";
                return 1;
            }
            write_text_file(s_out, solution_to_json(sol, &report).dump(2) + "\n");
            print_breakdown(sol.costs);
            if (!s_csv.empty()) append_cost_csv(s_csv, s_scenario, scheme.name(), sol.costs);
            return kOk;
        }

        if (check->parsed()) {
            auto sc = load_scenario_file(c_scenario);
            SchemeSpec scheme = SchemeSpec::parse(c_scheme);
            scheme.keep_alive_fraction = c_keepalive;
            std::ifstream in(c_solution);
            if (!in) {
                std::cerr << "error: cannot open " << c_solution << "\n";
                return kUsage;
            }
            json j;
            in >> j;
            auto sol = solution_from_json(j);
            auto transformed = apply_node_scheme(sc.services, scheme.node_level);
            derive_solution_traffic(sol, transformed, scheme);
            ObjectiveWeights weights{c_alpha, c_beta, c_gamma};
            auto table = effective_table(sc, c_step);
            auto report = check_solution(sc.network, sc.services, scheme, sol, weights, table);
            for (const auto& c : report.checks)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.constraint
                          << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
            return report.all_pass() ? kOk : 1;
        }

        if (sim->parsed()) {
            auto sc = load_scenario_file(m_scenario);
            SchemeSpec scheme = SchemeSpec::parse(m_scheme);
            scheme.keep_alive_fraction = m_keepalive;
            std::ifstream in(m_solution);
            if (!in) {
                std::cerr << "error: cannot open " << m_solution << "\n";
                return kUsage;
            }
            json j;
            in >> j;
            auto sol = solution_from_json(j);
            auto transformed = apply_node_scheme(sc.services, scheme.node_level);
            derive_solution_traffic(sol, transformed, scheme);
            auto table = effective_table(sc, m_step);

            std::ostringstream csv;
            if (!m_pdr.empty()) {
                auto rows = pdr_sweep(sc.network, sc.services, scheme, sol, m_pdr);
                csv << "p,E_RDTR,E_STR\n";
                for (const auto& r : rows)
                    csv << r.p << "," << r.e_rdtr << "," << r.e_str << "\n";
            } else {
                csv << "scheme,failed_from,failed_to,fraction,energy_mW,delivery_time_ms,"
                       "delivered_fraction\n";
                auto base = evaluate_no_failure(sc.network, sc.services, scheme, sol, table);
                csv << scheme.name() << ",,," << 1.0 << "," << base.energy_mw << ","
                    << base.delivery_time_ms << "," << base.delivered_fraction << "\n";
                if (!m_fail.empty()) {
                    auto out = evaluate_failure(sc.network, sc.services, scheme, sol, table,
                                                {m_fail[0], m_fail[1]}, m_fraction);
                    csv << scheme.name() << "," << m_fail[0] << "," << m_fail[1] << ","
                        << m_fraction << "," << out.energy_mw << "," << out.delivery_time_ms
                        << "," << out.delivered_fraction << "\n";
                }
                // Delivery times report queuing latency only; failure
                // detection timeouts are out of model.
            }
            if (m_out.empty()) std::cout << csv.str();
            else write_text_file(m_out, csv.str());
            return kOk;
        }

        if (emit->parsed()) {
            auto sc = load_scenario_file(e_scenario);
            SchemeSpec scheme = SchemeSpec::parse(e_scheme);
            scheme.keep_alive_fraction = e_keepalive;
            ObjectiveWeights weights{e_alpha, e_beta, e_gamma};
            auto table = effective_table(sc, e_step);
            auto instance = compile(sc.network, sc.services, scheme, weights, table);
            for (const auto& hint : instance.infeasibility_hints)
                std::cerr << "hint: " << hint << "\n";
            write_text_file(e_out, emit_lp(instance));
            std::cout << "wrote " << e_out << " (" << instance.variables.size()
                      << " variables, " << instance.constraints.size() << " constraints)\n";
            return kOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapacityViolation& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kUsage;
}
