#pragma once

// Exact desk-scale solver: depth-first enumeration of feasible node
// assignments and per-commodity route choices with incumbent pruning.
// Cost semantics match the model compiler; decoded solutions are
// recomputed through the cost model.

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iotembed/cost_model.hpp"
#include "iotembed/domain.hpp"
#include "iotembed/scheme.hpp"
#include "iotembed/solution.hpp"

namespace iotembed {

enum class SolveStatus { Optimal, Infeasible, LimitExceeded };

struct SolveLimits {
    double time_limit_s = 300.0;
    std::size_t max_paths_per_commodity = 4096;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<EmbeddingSolution> solution;
    std::string hint;  // names the blocking constraint family when infeasible
};

/// All simple directed paths from `src` to `dst`, neighbors visited in
/// ascending id order (deterministic enumeration).
inline std::vector<Path> all_simple_paths(const PhysicalNetwork& net, NodeId src, NodeId dst,
                                          std::size_t cap = 1 << 20) {
    std::vector<Path> out;
    Path cur{src};
    std::set<NodeId> used{src};
    auto dfs = [&](auto&& self, NodeId u) -> void {
        if (out.size() >= cap) return;
        if (u == dst) {
            out.push_back(cur);
            return;
        }
        for (NodeId v : net.neighbors(u)) {
            if (used.count(v)) continue;
            used.insert(v);
            cur.push_back(v);
            self(self, v);
            cur.pop_back();
            used.erase(v);
        }
    };
    dfs(dfs, src);
    return out;
}

inline bool links_disjoint(const Path& a, const Path& b) {
    std::set<DirectedLink> la;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) la.insert({a[i], a[i + 1]});
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
        if (la.count({b[i], b[i + 1]})) return false;
    return true;
}

namespace detail {

struct FlatVnode {
    const BusinessProcess* bp;
    const VirtualNode* vn;
};

struct ExactSearch {
    const PhysicalNetwork& net;
    const ServiceRequest& request;  // already node-scheme transformed
    const SchemeSpec& scheme;
    const ObjectiveWeights& weights;
    const LatencyTable& table;
    const SolveLimits& limits;

    std::vector<FlatVnode> vnodes;
    std::vector<std::vector<NodeId>> candidates;  // per vnode
    std::map<VnodeKey, NodeId> assignment;
    std::map<NodeId, double> mcu_used, ram_used;
    std::map<std::pair<std::string, NodeId>, int> bp_on_node;  // coexistence

    std::map<DirectedLink, std::vector<Path>> path_cache;
    std::map<DirectedLink, std::vector<std::pair<std::size_t, std::size_t>>> pair_cache;

    std::optional<EmbeddingSolution> best;
    double best_obj = 0.0;
    bool timed_out = false;
    bool saw_route_infeasible = false;
    std::string route_hint;
    std::chrono::steady_clock::time_point deadline;
    long tick = 0;

    bool out_of_time() {
        if (timed_out) return true;
        if ((++tick & 0x3ff) == 0 && std::chrono::steady_clock::now() > deadline)
            timed_out = true;
        return timed_out;
    }

    const std::vector<Path>& paths(DirectedLink cd) {
        auto it = path_cache.find(cd);
        if (it == path_cache.end())
            it = path_cache
                     .emplace(cd, all_simple_paths(net, cd.first, cd.second,
                                                   limits.max_paths_per_commodity))
                     .first;
        return it->second;
    }

    const std::vector<std::pair<std::size_t, std::size_t>>& disjoint_pairs(DirectedLink cd) {
        auto it = pair_cache.find(cd);
        if (it != pair_cache.end()) return it->second;
        const auto& ps = paths(cd);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = 0; j < ps.size(); ++j)
                if (i != j && links_disjoint(ps[i], ps[j])) pairs.push_back({i, j});
        return pair_cache.emplace(cd, std::move(pairs)).first->second;
    }

    double partial_cost(double tpp, const LinkTraffic& t1, const LinkTraffic& t2,
                        bool& feasible) {
        feasible = true;
        double tl = 0.0;
        auto arrivals = derive_arrivals(t1, t2);
        for (const auto& [node, rate] : arrivals) {
            if (rate > net.node(node).traffic_capacity + 1e-9 ||
                (rate > 0 && rate > table.max_rate() + 1e-9)) {
                feasible = false;
                return 0.0;
            }
            tl += node_latency(table, rate);
        }
        double tnp = network_power(net, t1, t2);
        return weights.alpha * tl + weights.beta * tpp + weights.gamma * tnp;
    }

    void route_dfs(const std::vector<std::pair<DirectedLink, double>>& commodities,
                   std::size_t k, double tpp, LinkTraffic& t1, LinkTraffic& t2,
                   std::map<DirectedLink, Path>& routes1,
                   std::map<DirectedLink, Path>& routes2) {
        if (out_of_time()) return;
        bool feasible = true;
        double cost = partial_cost(tpp, t1, t2, feasible);
        if (!feasible) return;
        if (best && cost >= best_obj) return;  // monotone lower bound
        if (k == commodities.size()) {
            EmbeddingSolution sol;
            sol.assignment = assignment;
            sol.routes1 = routes1;
            sol.routes2 = routes2;
            recompute_solution_costs(sol, net, request, scheme, weights, table);
            if (!best || sol.costs.objective < best_obj) {
                best_obj = sol.costs.objective;
                best = std::move(sol);
            }
            return;
        }
        auto [cd, demand] = commodities[k];
        auto apply = [&](const Path& p1, const Path* p2) {
            add_path_traffic(t1, p1, scheme.primary_scale() * demand);
            routes1[cd] = p1;
            if (p2) {
                add_path_traffic(t2, *p2, scheme.secondary_scale() * demand);
                routes2[cd] = *p2;
            }
            route_dfs(commodities, k + 1, tpp, t1, t2, routes1, routes2);
            add_path_traffic(t1, p1, -scheme.primary_scale() * demand);
            routes1.erase(cd);
            if (p2) {
                add_path_traffic(t2, *p2, -scheme.secondary_scale() * demand);
                routes2.erase(cd);
            }
        };
        if (scheme.dual_path()) {
            const auto& ps = paths(cd);
            const auto& pairs = disjoint_pairs(cd);
            if (pairs.empty()) {
                saw_route_infeasible = true;
                route_hint = "no link-disjoint path pair for commodity (" +
                             std::to_string(cd.first) + "," + std::to_string(cd.second) +
                             "): constraint (27)";
                return;
            }
            for (const auto& [i, j] : pairs) apply(ps[i], &ps[j]);
        } else {
            const auto& ps = paths(cd);
            if (ps.empty()) {
                saw_route_infeasible = true;
                route_hint = "no path for commodity (" + std::to_string(cd.first) + "," +
                             std::to_string(cd.second) + "): constraint (17)";
                return;
            }
            for (const auto& p : ps) apply(p, nullptr);
        }
    }

    void assign_dfs(std::size_t k, double tpp) {
        if (out_of_time()) return;
        if (best && weights.beta * tpp >= best_obj) return;
        if (k == vnodes.size()) {
            auto all = commodity_demands(request, assignment);
            std::vector<std::pair<DirectedLink, double>> commodities;
            for (const auto& [cd, demand] : all)
                if (demand > 0) commodities.push_back({cd, demand});
            LinkTraffic t1, t2;
            std::map<DirectedLink, Path> routes1, routes2;
            route_dfs(commodities, 0, tpp, t1, t2, routes1, routes2);
            return;
        }
        const auto& [bp, vn] = vnodes[k];
        for (NodeId c : candidates[k]) {
            const auto& node = net.node(c);
            if (scheme.coexistence && bp_on_node[{bp->id, c}] > 0) continue;
            if (mcu_used[c] + vn->mcu_demand > node.mcu_capacity + 1e-9) continue;
            if (ram_used[c] + vn->ram_demand > node.ram_capacity + 1e-9) continue;

            double dtpp = node.max_cpu_power * (vn->mcu_demand / node.mcu_capacity);
            if (mcu_used[c] == 0.0) dtpp += node.idle_cpu_power;  // module switch-on
            assignment[{bp->id, vn->id}] = c;
            mcu_used[c] += vn->mcu_demand;
            ram_used[c] += vn->ram_demand;
            ++bp_on_node[{bp->id, c}];
            assign_dfs(k + 1, tpp + dtpp);
            --bp_on_node[{bp->id, c}];
            ram_used[c] -= vn->ram_demand;
            mcu_used[c] -= vn->mcu_demand;
            if (mcu_used[c] < 1e-12) mcu_used[c] = 0.0;
            assignment.erase({bp->id, vn->id});
        }
    }
};

}  // namespace detail

/// Provably optimal embedding for desk-scale instances. Applies the
/// node-level transform, enumerates assignments and routes with
/// incumbent pruning, and decodes the best candidate through the cost
/// model. Deterministic: first-found among equal objectives wins under a
/// fixed lexicographic enumeration order.
inline SolveResult solve_exact(const PhysicalNetwork& net, const ServiceRequest& raw_request,
                               const SchemeSpec& scheme, const ObjectiveWeights& weights,
                               const LatencyTable& table, const SolveLimits& limits = {}) {
    const ServiceRequest request = apply_node_scheme(raw_request, scheme.node_level);

    if (request.vnode_count() == 0) {
        EmbeddingSolution empty;
        empty.scheme = scheme.name();
        empty.costs = total_objective(weights, 0, 0, 0);
        return {SolveStatus::Optimal, std::move(empty), ""};
    }

    detail::ExactSearch s{net, request, scheme, weights, table, limits};
    s.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(limits.time_limit_s));

    for (const auto& bp : request.bps)
        for (const auto& vn : bp.vnodes) {
            s.vnodes.push_back({&bp, &vn});
            std::vector<NodeId> cand;
            for (const auto& n : net.nodes()) {
                if (!n.functions.count(vn.required_function)) continue;
                if (vn.required_zone != kAnyZone && n.zone != vn.required_zone) continue;
                if (vn.mcu_demand > n.mcu_capacity + 1e-9) continue;
                if (vn.ram_demand > n.ram_capacity + 1e-9) continue;
                cand.push_back(n.id);
            }
            if (cand.empty())
                return {SolveStatus::Infeasible, std::nullopt,
                        "no feasible node for " + bp.id + "/" + vn.id +
                            ": constraints (9)-(14)"};
            s.candidates.push_back(std::move(cand));
        }

    s.assign_dfs(0, 0.0);

    if (s.best) {
        SolveStatus st = s.timed_out ? SolveStatus::LimitExceeded : SolveStatus::Optimal;
        return {st, std::move(s.best), s.timed_out ? "time limit reached; best incumbent" : ""};
    }
    if (s.timed_out)
        return {SolveStatus::LimitExceeded, std::nullopt, "time limit reached, no incumbent"};
    return {SolveStatus::Infeasible, std::nullopt,
            s.saw_route_infeasible ? s.route_hint
                                   : "no feasible assignment: constraints (5)-(14)"};
}

}  // namespace iotembed
