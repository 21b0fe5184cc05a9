#pragma once

// Embedding solution representation plus the shared derivations used by
// the solvers, the checker and the evaluators: commodity aggregation,
// per-link traffic maps, node arrival rates and cost recomputation.

#include <map>
#include <string>
#include <vector>

#include "iotembed/cost_model.hpp"
#include "iotembed/domain.hpp"
#include "iotembed/scheme.hpp"

namespace iotembed {

using Path = std::vector<NodeId>;            // node sequence, source..destination
using VnodeKey = std::pair<std::string, std::string>;  // (bp id, vnode id)

struct EmbeddingSolution {
    std::map<VnodeKey, NodeId> assignment;
    std::map<DirectedLink, Path> routes1;    // commodity (c,d) -> primary path
    std::map<DirectedLink, Path> routes2;    // commodity (c,d) -> secondary path
    LinkTraffic link_traffic1;
    LinkTraffic link_traffic2;
    std::map<NodeId, double> node_arrivals;  // kb/s
    CostBreakdown costs;
    std::string scheme;
};

/// Aggregates embedded virtual-link demands into directed physical
/// commodities (c,d), c != d. Colocated endpoints contribute no traffic.
inline std::map<DirectedLink, double> commodity_demands(
    const ServiceRequest& request, const std::map<VnodeKey, NodeId>& assignment) {
    std::map<DirectedLink, double> demands;
    for (const auto& bp : request.bps) {
        for (const auto& vl : bp.vlinks) {
            auto cit = assignment.find({bp.id, vl.from});
            auto dit = assignment.find({bp.id, vl.to});
            if (cit == assignment.end() || dit == assignment.end())
                throw std::invalid_argument("virtual link endpoint unassigned in BP " + bp.id);
            if (cit->second == dit->second) continue;
            demands[{cit->second, dit->second}] += vl.traffic_demand;
        }
    }
    return demands;
}

/// Adds `kbps` along each directed link of `path` into `traffic`.
/// Entries that cancel to (numerically) zero are erased so that undo
/// passes leave no residue behind.
inline void add_path_traffic(LinkTraffic& traffic, const Path& path, double kbps) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        DirectedLink l{path[i], path[i + 1]};
        auto it = traffic.try_emplace(l, 0.0).first;
        it->second += kbps;
        if (std::abs(it->second) < 1e-9) traffic.erase(it);
    }
}

/// Node arrival rate = incoming traffic over both paths.
inline std::map<NodeId, double> derive_arrivals(const LinkTraffic& t1, const LinkTraffic& t2) {
    std::map<NodeId, double> arrivals;
    for (const LinkTraffic* t : {&t1, &t2})
        for (const auto& [key, kbps] : *t) arrivals[key.second] += kbps;
    return arrivals;
}

/// Fills the traffic maps and arrival rates of a solution from its
/// routes under the scheme's scaling, leaving costs untouched. Used when
/// rehydrating a serialized solution (the maps are derived data).
inline void derive_solution_traffic(EmbeddingSolution& sol,
                                    const ServiceRequest& transformed_request,
                                    const SchemeSpec& scheme) {
    auto demands = commodity_demands(transformed_request, sol.assignment);
    sol.link_traffic1.clear();
    sol.link_traffic2.clear();
    for (const auto& [cd, demand] : demands) {
        auto r1 = sol.routes1.find(cd);
        if (r1 != sol.routes1.end())
            add_path_traffic(sol.link_traffic1, r1->second, scheme.primary_scale() * demand);
        auto r2 = sol.routes2.find(cd);
        if (r2 != sol.routes2.end())
            add_path_traffic(sol.link_traffic2, r2->second, scheme.secondary_scale() * demand);
    }
    sol.node_arrivals = derive_arrivals(sol.link_traffic1, sol.link_traffic2);
}

/// Rebuilds traffic maps, arrivals and the cost breakdown of a solution
/// from its assignment and routes under the given scheme semantics.
/// Throws CapacityViolation when an arrival rate has no latency level.
inline void recompute_solution_costs(EmbeddingSolution& sol, const PhysicalNetwork& net,
                                     const ServiceRequest& transformed_request,
                                     const SchemeSpec& scheme, const ObjectiveWeights& weights,
                                     const LatencyTable& table) {
    auto demands = commodity_demands(transformed_request, sol.assignment);
    sol.link_traffic1.clear();
    sol.link_traffic2.clear();
    for (const auto& [cd, demand] : demands) {
        if (demand <= 0.0) continue;  // no traffic, no route required
        auto r1 = sol.routes1.find(cd);
        if (r1 == sol.routes1.end())
            throw std::invalid_argument("missing primary route for commodity");
        add_path_traffic(sol.link_traffic1, r1->second, scheme.primary_scale() * demand);
        if (scheme.dual_path()) {
            auto r2 = sol.routes2.find(cd);
            if (r2 == sol.routes2.end())
                throw std::invalid_argument("missing secondary route for commodity");
            add_path_traffic(sol.link_traffic2, r2->second, scheme.secondary_scale() * demand);
        }
    }
    sol.node_arrivals = derive_arrivals(sol.link_traffic1, sol.link_traffic2);

    double tl = 0.0;
    for (const auto& [node, rate] : sol.node_arrivals) {
        if (rate > net.node(node).traffic_capacity + 1e-9)
            throw CapacityViolation("node arrival exceeds traffic capacity");
        tl += node_latency(table, rate);
    }

    double tpp = 0.0;
    std::map<NodeId, std::vector<VirtualNode>> hosted;
    for (const auto& bp : transformed_request.bps)
        for (const auto& v : bp.vnodes)
            hosted[sol.assignment.at({bp.id, v.id})].push_back(v);
    for (const auto& [node, vs] : hosted) tpp += processing_power(net.node(node), vs);

    double tnp = network_power(net, sol.link_traffic1, sol.link_traffic2);
    sol.costs = total_objective(weights, tl, tpp, tnp);
    sol.scheme = scheme.name();
}

}  // namespace iotembed
