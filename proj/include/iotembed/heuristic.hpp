#pragma once

// Fast non-exact embedding for instances beyond exact reach: greedy
// placement by incremental processing power, min-cost (dual-disjoint)
// routing over a load-aware edge cost, and strict-improvement local
// search.

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "iotembed/cost_model.hpp"
#include "iotembed/domain.hpp"
#include "iotembed/exact_solver.hpp"  // links_disjoint
#include "iotembed/scheme.hpp"
#include "iotembed/solution.hpp"

namespace iotembed {

struct HeuristicConfig {
    int k_candidate_paths = 4;
    int local_search_budget = 20;
    std::uint64_t seed = 0;
};

class EmbedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RouteMode { Single, DualDisjoint };

using EdgeCost = std::function<double(DirectedLink)>;  // +inf marks a forbidden edge

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dijkstra with ascending-id tie-breaking; `banned` links are skipped.
inline std::optional<Path> shortest_path(const PhysicalNetwork& net, NodeId src, NodeId dst,
                                         const EdgeCost& cost,
                                         const std::set<DirectedLink>& banned = {},
                                         const std::set<NodeId>& banned_nodes = {}) {
    std::map<NodeId, double> dist;
    std::map<NodeId, NodeId> prev;
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (u == dst) break;
        for (NodeId v : net.neighbors(u)) {
            if (banned.count({u, v})) continue;
            if (banned_nodes.count(v) && v != dst) continue;
            double c = cost({u, v});
            if (!(c < kInf)) continue;
            double nd = d + c;
            auto it = dist.find(v);
            if (it == dist.end() || nd < it->second - 1e-15) {
                dist[v] = nd;
                prev[v] = u;
                pq.push({nd, v});
            }
        }
    }
    if (!dist.count(dst)) return std::nullopt;
    Path p{dst};
    while (p.back() != src) p.push_back(prev.at(p.back()));
    std::reverse(p.begin(), p.end());
    return p;
}

inline double path_cost(const Path& p, const EdgeCost& cost) {
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) c += cost({p[i], p[i + 1]});
    return c;
}

/// Yen-style k shortest simple paths.
inline std::vector<Path> k_shortest_paths(const PhysicalNetwork& net, NodeId src, NodeId dst,
                                          const EdgeCost& cost, int k) {
    std::vector<Path> result;
    auto first = shortest_path(net, src, dst, cost);
    if (!first) return result;
    result.push_back(*first);
    std::vector<std::pair<double, Path>> candidates;
    while (static_cast<int>(result.size()) < k) {
        const Path& last = result.back();
        for (std::size_t spur = 0; spur + 1 < last.size(); ++spur) {
            Path root(last.begin(), last.begin() + spur + 1);
            std::set<DirectedLink> banned;
            for (const auto& p : result)
                if (p.size() > spur &&
                    std::equal(root.begin(), root.end(), p.begin()))
                    banned.insert({p[spur], p[spur + 1]});
            std::set<NodeId> banned_nodes(root.begin(), root.end() - 1);
            auto tail = shortest_path(net, root.back(), dst, cost, banned, banned_nodes);
            if (!tail) continue;
            Path full = root;
            full.insert(full.end(), tail->begin() + 1, tail->end());
            if (std::find_if(result.begin(), result.end(),
                             [&](const Path& p) { return p == full; }) != result.end())
                continue;
            if (std::find_if(candidates.begin(), candidates.end(), [&](const auto& c) {
                    return c.second == full;
                }) != candidates.end())
                continue;
            candidates.push_back({path_cost(full, cost), full});
        }
        if (candidates.empty()) break;
        auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [](const auto& a, const auto& b) {
                                         return a.first != b.first ? a.first < b.first
                                                                   : a.second < b.second;
                                     });
        result.push_back(best->second);
        candidates.erase(best);
    }
    return result;
}

}  // namespace detail

struct RoutePair {
    Path primary;
    std::optional<Path> secondary;
};

/// Min-cost route(s) for one commodity. Dual mode returns the
/// link-disjoint pair with minimal combined cost among k primary
/// candidates, with an edge-removal fallback per candidate.
inline RoutePair route_paths(const PhysicalNetwork& net, NodeId src, NodeId dst,
                             RouteMode mode, const EdgeCost& cost, int k = 4) {
    if (src == dst) throw std::invalid_argument("route_paths: source equals destination");
    if (mode == RouteMode::Single) {
        auto p = detail::shortest_path(net, src, dst, cost);
        if (!p) throw EmbedError("no path between " + std::to_string(src) + " and " +
                                 std::to_string(dst));
        return {*p, std::nullopt};
    }
    auto candidates = detail::k_shortest_paths(net, src, dst, cost, std::max(k, 2));
    if (candidates.empty())
        throw EmbedError("no path between " + std::to_string(src) + " and " +
                         std::to_string(dst));
    std::optional<RoutePair> best;
    double best_cost = detail::kInf;
    for (const auto& primary : candidates) {
        std::set<DirectedLink> banned;
        for (std::size_t i = 0; i + 1 < primary.size(); ++i)
            banned.insert({primary[i], primary[i + 1]});
        auto secondary = detail::shortest_path(net, src, dst, cost, banned);
        if (!secondary) continue;
        double c = detail::path_cost(primary, cost) + detail::path_cost(*secondary, cost);
        if (c < best_cost) {
            best_cost = c;
            best = RoutePair{primary, secondary};
        }
    }
    if (!best)
        throw EmbedError("no link-disjoint path pair between " + std::to_string(src) +
                         " and " + std::to_string(dst) + " (constraint (27))");
    return *best;
}

namespace detail {

/// Load-aware edge cost mirroring the objective locally: gamma-weighted
/// transmission power plus alpha-weighted marginal table latency at the
/// destination, plus idle power for waking an inactive node.
inline EdgeCost make_edge_cost(const PhysicalNetwork& net, const ObjectiveWeights& weights,
                               const LatencyTable& table,
                               const std::map<NodeId, double>& arrivals,
                               const std::set<NodeId>& active, double add_kbps) {
    return [&net, &weights, &table, &arrivals, &active, add_kbps](DirectedLink ef) {
        const auto& link = net.link(ef.first, ef.second);
        double arr = arrivals.count(ef.second) ? arrivals.at(ef.second) : 0.0;
        double target = arr + add_kbps;
        if (target > net.node(ef.second).traffic_capacity + 1e-9 ||
            target > table.max_rate() + 1e-9)
            return kInf;
        double marginal_w = node_latency(table, target) - node_latency(table, arr);
        double c = weights.gamma * link_power_per_kbps(link) * add_kbps +
                   weights.alpha * marginal_w;
        for (NodeId n : {ef.first, ef.second})
            if (!active.count(n)) c += weights.gamma * net.node(n).idle_net_power;
        return c + 1e-9;  // strictly positive, keeps Dijkstra ties stable
    };
}

/// Routes every commodity of the given assignment, committing load as it
/// goes. Throws EmbedError when a commodity cannot be routed.
inline EmbeddingSolution route_all(const PhysicalNetwork& net,
                                   const ServiceRequest& transformed,
                                   const SchemeSpec& scheme, const ObjectiveWeights& weights,
                                   const LatencyTable& table,
                                   const std::map<VnodeKey, NodeId>& assignment, int k) {
    EmbeddingSolution sol;
    sol.assignment = assignment;
    std::map<NodeId, double> arrivals;
    std::set<NodeId> active;
    auto commit = [&](const Path& p, double kbps) {
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            arrivals[p[i + 1]] += kbps;
            if (kbps > 0) {
                active.insert(p[i]);
                active.insert(p[i + 1]);
            }
        }
    };
    for (const auto& [cd, demand] : commodity_demands(transformed, assignment)) {
        if (demand <= 0) continue;
        double p_kbps = scheme.primary_scale() * demand;
        double s_kbps = scheme.secondary_scale() * demand;
        auto cost = make_edge_cost(net, weights, table, arrivals, active, p_kbps);
        auto mode = scheme.dual_path() ? RouteMode::DualDisjoint : RouteMode::Single;
        auto routes = route_paths(net, cd.first, cd.second, mode, cost, k);
        sol.routes1[cd] = routes.primary;
        commit(routes.primary, p_kbps);
        if (routes.secondary) {
            sol.routes2[cd] = *routes.secondary;
            commit(*routes.secondary, s_kbps);
        }
    }
    recompute_solution_costs(sol, net, transformed, scheme, weights, table);
    return sol;
}

}  // namespace detail

/// Greedy embedding: places vnodes in descending MCU-demand order onto
/// the feasible node with minimal incremental processing power, then
/// routes each commodity over the load-aware cost.
inline EmbeddingSolution embed_greedy(const PhysicalNetwork& net,
                                      const ServiceRequest& raw_request,
                                      const SchemeSpec& scheme,
                                      const ObjectiveWeights& weights,
                                      const LatencyTable& table,
                                      const HeuristicConfig& config = {}) {
    const ServiceRequest request = apply_node_scheme(raw_request, scheme.node_level);

    struct Slot {
        const BusinessProcess* bp;
        const VirtualNode* vn;
    };
    std::vector<Slot> order;
    for (const auto& bp : request.bps)
        for (const auto& vn : bp.vnodes) order.push_back({&bp, &vn});
    std::stable_sort(order.begin(), order.end(), [](const Slot& a, const Slot& b) {
        return a.vn->mcu_demand > b.vn->mcu_demand;
    });

    std::map<VnodeKey, NodeId> assignment;
    std::map<NodeId, double> mcu_used, ram_used;
    std::map<std::pair<std::string, NodeId>, int> bp_on_node;
    for (const auto& [bp, vn] : order) {
        std::optional<NodeId> pick;
        double pick_cost = detail::kInf;
        for (const auto& n : net.nodes()) {
            if (!n.functions.count(vn->required_function)) continue;
            if (vn->required_zone != kAnyZone && n.zone != vn->required_zone) continue;
            if (scheme.coexistence && bp_on_node[{bp->id, n.id}] > 0) continue;
            if (mcu_used[n.id] + vn->mcu_demand > n.mcu_capacity + 1e-9) continue;
            if (ram_used[n.id] + vn->ram_demand > n.ram_capacity + 1e-9) continue;
            double c = n.max_cpu_power * (vn->mcu_demand / n.mcu_capacity);
            if (mcu_used[n.id] == 0.0) c += n.idle_cpu_power;
            if (c < pick_cost) {
                pick_cost = c;
                pick = n.id;
            }
        }
        if (!pick)
            throw EmbedError("no feasible node for " + bp->id + "/" + vn->id);
        assignment[{bp->id, vn->id}] = *pick;
        mcu_used[*pick] += vn->mcu_demand;
        ram_used[*pick] += vn->ram_demand;
        ++bp_on_node[{bp->id, *pick}];
    }

    return detail::route_all(net, request, scheme, weights, table, assignment,
                             config.k_candidate_paths);
}

/// Strict-improvement local search over single-vnode relocations (with
/// full re-routing). Objective is monotone non-increasing; budget 0
/// returns the input unchanged.
inline EmbeddingSolution local_search(const PhysicalNetwork& net,
                                      const ServiceRequest& raw_request,
                                      const SchemeSpec& scheme,
                                      const ObjectiveWeights& weights,
                                      const LatencyTable& table, EmbeddingSolution current,
                                      int budget, int k_candidate_paths = 4) {
    const ServiceRequest request = apply_node_scheme(raw_request, scheme.node_level);
    for (int iter = 0; iter < budget; ++iter) {
        std::optional<EmbeddingSolution> best_move;
        for (const auto& [key, host] : current.assignment) {
            const BusinessProcess* bp = nullptr;
            const VirtualNode* vn = nullptr;
            for (const auto& b : request.bps)
                if (b.id == key.first)
                    for (const auto& v : b.vnodes)
                        if (v.id == key.second) {
                            bp = &b;
                            vn = &v;
                        }
            if (!vn) continue;
            for (const auto& n : net.nodes()) {
                if (n.id == host) continue;
                if (!n.functions.count(vn->required_function)) continue;
                if (vn->required_zone != kAnyZone && n.zone != vn->required_zone) continue;
                auto trial = current.assignment;
                trial[key] = n.id;
                // capacity / coexistence screening on the trial assignment
                std::map<NodeId, double> mcu, ram;
                std::map<std::pair<std::string, NodeId>, int> coex;
                bool ok = true;
                for (const auto& b : request.bps)
                    for (const auto& v : b.vnodes) {
                        NodeId t = trial.at({b.id, v.id});
                        mcu[t] += v.mcu_demand;
                        ram[t] += v.ram_demand;
                        if (scheme.coexistence && ++coex[{b.id, t}] > 1) ok = false;
                    }
                for (const auto& [id, used] : mcu)
                    if (used > net.node(id).mcu_capacity + 1e-9) ok = false;
                for (const auto& [id, used] : ram)
                    if (used > net.node(id).ram_capacity + 1e-9) ok = false;
                if (!ok) continue;
                try {
                    auto cand = detail::route_all(net, request, scheme, weights, table,
                                                  trial, k_candidate_paths);
                    if (cand.costs.objective < current.costs.objective - 1e-12 &&
                        (!best_move || cand.costs.objective < best_move->costs.objective))
                        best_move = std::move(cand);
                } catch (const EmbedError&) {
                    continue;
                } catch (const CapacityViolation&) {
                    continue;
                }
            }
        }
        if (!best_move) break;
        current = std::move(*best_move);
    }
    return current;
}

}  // namespace iotembed
