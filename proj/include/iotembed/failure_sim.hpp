#pragma once

// Link-failure and packet-delivery-ratio evaluation of embedded
// solutions: per-mode energy accounting for the delivery of one batch of
// traffic with and without a single link failure, and the RDTR/STR
// expected-energy sweep over PDR values.

#include <map>
#include <stdexcept>
#include <vector>

#include "iotembed/cost_model.hpp"
#include "iotembed/domain.hpp"
#include "iotembed/scheme.hpp"
#include "iotembed/solution.hpp"

namespace iotembed {

struct DeliveryOutcome {
    double energy_mw = 0.0;
    double delivery_time_ms = 0.0;  // queuing latency only
    double delivered_fraction = 1.0;
};

namespace sim_detail {

inline bool path_uses(const Path& p, DirectedLink l) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] == l.first && p[i + 1] == l.second) return true;
    return false;
}

struct PathScales {
    double primary;
    double secondary;
};

/// Per-commodity traffic volume multipliers (fractions of demand) for a
/// given mode, failure location and failure timing f (fraction of the
/// batch delivered before the failure strikes; f = 1 reduces every mode
/// to its no-failure accounting).
inline PathScales commodity_scales(TrafficMode mode, double keep_alive, bool on_primary,
                                   bool on_secondary, double f) {
    switch (mode) {
        case TrafficMode::SingleRetransmit:
            // Full attempt plus resend of the undelivered remainder.
            if (on_primary) return {1.0 + (1.0 - f), 0.0};
            return {1.0, 0.0};
        case TrafficMode::RDTR:
            // Failed primary: the full attempt is spent, the remainder is
            // resent at full demand on the backup (Fig. 6 regime).
            if (on_primary) return {1.0, (1.0 - f) + f * keep_alive};
            return {1.0, keep_alive};
        case TrafficMode::RPTR:
            return {1.0, 1.0};  // surviving replica delivers; energy unchanged
        default:  // STR
            if (on_primary) return {0.5, 0.5 + (1.0 - f) * 0.5};
            if (on_secondary) return {0.5 + (1.0 - f) * 0.5, 0.5};
            return {0.5, 0.5};
    }
}

struct Accounted {
    LinkTraffic t1, t2;
};

inline Accounted accumulate(const EmbeddingSolution& sol, const ServiceRequest& transformed,
                            const SchemeSpec& scheme,
                            std::optional<DirectedLink> failed, double f) {
    Accounted acc;
    for (const auto& [cd, demand] : commodity_demands(transformed, sol.assignment)) {
        if (demand <= 0) continue;
        auto it1 = sol.routes1.find(cd);
        if (it1 == sol.routes1.end())
            throw std::invalid_argument("solution lacks primary route for commodity");
        const Path* p2 = nullptr;
        if (scheme.dual_path()) {
            auto it2 = sol.routes2.find(cd);
            if (it2 == sol.routes2.end())
                throw std::invalid_argument("solution lacks secondary route for commodity");
            p2 = &it2->second;
        }
        bool on1 = failed && path_uses(it1->second, *failed);
        bool on2 = failed && p2 && path_uses(*p2, *failed);
        if (on1 && on2)
            throw std::invalid_argument(
                "failed link lies on both routes of a commodity (violates (27))");
        auto scales = commodity_scales(scheme.traffic_mode, scheme.keep_alive_fraction,
                                       on1, on2, failed ? f : 1.0);
        add_path_traffic(acc.t1, it1->second, scales.primary * demand);
        if (p2) add_path_traffic(acc.t2, *p2, scales.secondary * demand);
    }
    return acc;
}

/// Slowest used path's end-to-end queuing latency at the given arrivals.
inline double slowest_path_latency(const EmbeddingSolution& sol, const SchemeSpec& scheme,
                                   const LatencyTable& table,
                                   const std::map<NodeId, double>& arrivals) {
    double worst = 0.0;
    auto path_lat = [&](const Path& p) {
        double t = 0.0;
        for (std::size_t i = 1; i < p.size(); ++i) {
            double arr = arrivals.count(p[i]) ? arrivals.at(p[i]) : 0.0;
            t += node_latency(table, arr);
        }
        return t;
    };
    for (const auto& [cd, p] : sol.routes1) worst = std::max(worst, path_lat(p));
    // The backup path only carries data traffic in replication/splitting.
    if (scheme.traffic_mode == TrafficMode::RPTR || scheme.traffic_mode == TrafficMode::STR)
        for (const auto& [cd, p] : sol.routes2) worst = std::max(worst, path_lat(p));
    return worst;
}

}  // namespace sim_detail

/// Energy and delivery time of one delivered batch with no failure.
inline DeliveryOutcome evaluate_no_failure(const PhysicalNetwork& net,
                                           const ServiceRequest& raw_request,
                                           const SchemeSpec& scheme,
                                           const EmbeddingSolution& sol,
                                           const LatencyTable& table) {
    const ServiceRequest transformed = apply_node_scheme(raw_request, scheme.node_level);
    auto acc = sim_detail::accumulate(sol, transformed, scheme, std::nullopt, 1.0);
    DeliveryOutcome out;
    out.energy_mw = network_power(net, acc.t1, acc.t2);
    out.delivery_time_ms =
        sim_detail::slowest_path_latency(sol, scheme, table, derive_arrivals(acc.t1, acc.t2));
    out.delivered_fraction = 1.0;
    return out;
}

/// Energy and delivery time with one failed directed link.
/// `failure_fraction` models when the failure strikes: 0 = before any
/// delivery (worst case, default), 1 = after completion.
inline DeliveryOutcome evaluate_failure(const PhysicalNetwork& net,
                                        const ServiceRequest& raw_request,
                                        const SchemeSpec& scheme,
                                        const EmbeddingSolution& sol,
                                        const LatencyTable& table, DirectedLink failed_link,
                                        double failure_fraction = 0.0) {
    if (failure_fraction < 0.0 || failure_fraction > 1.0)
        throw std::invalid_argument("failure_fraction must lie in [0,1]");
    const ServiceRequest transformed = apply_node_scheme(raw_request, scheme.node_level);
    auto acc =
        sim_detail::accumulate(sol, transformed, scheme, failed_link, failure_fraction);
    DeliveryOutcome out;
    out.energy_mw = network_power(net, acc.t1, acc.t2);
    out.delivery_time_ms =
        sim_detail::slowest_path_latency(sol, scheme, table, derive_arrivals(acc.t1, acc.t2));
    out.delivered_fraction = 1.0;  // recovery always completes the batch
    return out;
}

struct PdrRow {
    double p;       // per-path delivery probability
    double e_rdtr;  // expected energy, mW
    double e_str;
};

/// Expected delivery energy for RDTR and STR over a shared dual-path
/// route set under independent per-path failure with probability 1-p.
/// Both curves share the idle term of the nodes the routes activate, so
/// their crossover depends only on the traffic-proportional energies.
inline std::vector<PdrRow> pdr_sweep(const PhysicalNetwork& net,
                                     const ServiceRequest& raw_request,
                                     const SchemeSpec& scheme, const EmbeddingSolution& sol,
                                     const std::vector<double>& pdr_values) {
    const ServiceRequest transformed = apply_node_scheme(raw_request, scheme.node_level);
    double e1 = 0.0, e2 = 0.0;
    std::set<NodeId> active;
    auto path_energy = [&](const Path& p, double kbps) {
        double e = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            e += kbps * link_power_per_kbps(net.link(p[i], p[i + 1]));
            active.insert(p[i]);
            active.insert(p[i + 1]);
        }
        return e;
    };
    for (const auto& [cd, demand] : commodity_demands(transformed, sol.assignment)) {
        if (demand <= 0) continue;
        auto it1 = sol.routes1.find(cd);
        auto it2 = sol.routes2.find(cd);
        if (it1 == sol.routes1.end() || it2 == sol.routes2.end())
            throw std::invalid_argument("pdr_sweep requires a dual-path solution");
        e1 += path_energy(it1->second, demand);
        e2 += path_energy(it2->second, demand);
    }
    double idle = 0.0;
    for (NodeId n : active) idle += net.node(n).idle_net_power;

    const double ka = scheme.keep_alive_fraction;
    std::vector<PdrRow> rows;
    for (double p : pdr_values) {
        if (!(p > 0.0) || p > 1.0)
            throw std::invalid_argument("PDR values must lie in (0,1]");
        double q = 1.0 - p;
        PdrRow row;
        row.p = p;
        row.e_rdtr = idle + e1 + ka * e2 + q * e2;
        row.e_str = idle + 0.5 * (e1 + e2) + q * 0.5 * (e1 + e2);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace iotembed
