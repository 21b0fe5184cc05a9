#pragma once

// Power and latency evaluation for candidate embeddings: linear CPU power
// profile, first-order radio link energy, M/M/1 latency table and the
// weighted scalar objective.

#include <map>
#include <stdexcept>
#include <vector>

#include "iotembed/domain.hpp"

namespace iotembed {

struct LatencyLevel {
    double lambda_kbps;  // arrival rate
    double w_ms;         // mean latency at that rate
};

/// Discretized arrival-rate -> mean-latency map. Levels are strictly
/// ascending in lambda and strictly increasing in W; every level stays
/// below the node traffic capacity (rho < 1).
struct LatencyTable {
    std::vector<LatencyLevel> levels;
    double capacity_kbps = 0.0;
    double packet_bytes = 0.0;

    double max_rate() const {
        return levels.empty() ? 0.0 : levels.back().lambda_kbps;
    }
};

/// Builds levels at step, 2*step, ... below capacity with M/M/1 mean
/// sojourn time: W(lambda) = 1000/(mu - lambda_pkt) ms, where mu and
/// lambda_pkt are in packets/s.
inline LatencyTable build_latency_table(double capacity_kbps, double packet_bytes,
                                        double step_kbps) {
    if (step_kbps <= 0 || step_kbps >= capacity_kbps)
        throw std::invalid_argument("step must satisfy 0 < step < capacity");
    LatencyTable t;
    t.capacity_kbps = capacity_kbps;
    t.packet_bytes = packet_bytes;
    const double kb_per_packet = packet_bytes * 8.0 / 1000.0;
    const double mu = capacity_kbps / kb_per_packet;  // packets/s
    for (double lam = step_kbps; lam < capacity_kbps - 1e-12; lam += step_kbps) {
        double lam_pkt = lam / kb_per_packet;
        t.levels.push_back({lam, 1000.0 / (mu - lam_pkt)});
    }
    return t;
}

class CapacityViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ceiling lookup: W of the smallest level with lambda_j >= arrival_rate.
/// Zero arrival means no queue and returns 0. Rates above the top level
/// are a capacity violation.
inline double node_latency(const LatencyTable& table, double arrival_kbps) {
    if (arrival_kbps < 0)
        throw std::invalid_argument("arrival rate must be >= 0");
    if (arrival_kbps == 0.0) return 0.0;
    for (const auto& lv : table.levels)
        if (lv.lambda_kbps >= arrival_kbps) return lv.w_ms;
    throw CapacityViolation("arrival rate exceeds top latency level");
}

/// Linear CPU power profile: idle power plus max power scaled by MCU
/// utilization, zero when nothing is hosted.
inline double processing_power(const IoTNode& node, const std::vector<VirtualNode>& hosted) {
    if (hosted.empty()) return 0.0;
    double mcu_sum = 0.0;
    double p = node.idle_cpu_power;
    for (const auto& v : hosted) {
        mcu_sum += v.mcu_demand;
        p += node.max_cpu_power * (v.mcu_demand / node.mcu_capacity);
    }
    if (mcu_sum > node.mcu_capacity + 1e-9)
        throw CapacityViolation("hosted MCU demand exceeds node capacity");
    return p;
}

/// Per-unit transmission cost of a link: transmit+receive energy per bit
/// plus the distance-squared amplifier term (which appears once).
inline double link_power_per_kbps(const IoTLink& link) {
    return 2.0 * link.energy_per_bit + link.distance * link.distance * link.amplifier_factor;
}

using LinkTraffic = std::map<DirectedLink, double>;  // kb/s per directed link

/// Network power: idle power of every node touching nonzero traffic on
/// either map plus the traffic-proportional link terms.
inline double network_power(const PhysicalNetwork& net, const LinkTraffic& traffic1,
                            const LinkTraffic& traffic2) {
    std::set<NodeId> active;
    double p = 0.0;
    for (const LinkTraffic* t : {&traffic1, &traffic2}) {
        for (const auto& [key, kbps] : *t) {
            if (!net.has_link(key.first, key.second))
                throw std::invalid_argument("traffic on nonexistent link " +
                                            std::to_string(key.first) + "->" +
                                            std::to_string(key.second));
            if (kbps == 0.0) continue;
            active.insert(key.first);
            active.insert(key.second);
            p += kbps * link_power_per_kbps(net.link(key.first, key.second));
        }
    }
    for (NodeId id : active) p += net.node(id).idle_net_power;
    return p;
}

struct ObjectiveWeights {
    double alpha = 30.0;  // 1/ms
    double beta = 1.0;    // 1/mW
    double gamma = 1.0;   // 1/mW
};

struct CostBreakdown {
    double tl_ms = 0.0;
    double tpp_mw = 0.0;
    double tnp_mw = 0.0;
    double objective = 0.0;
};

inline CostBreakdown total_objective(const ObjectiveWeights& w, double tl_ms,
                                     double tpp_mw, double tnp_mw) {
    CostBreakdown c;
    c.tl_ms = tl_ms;
    c.tpp_mw = tpp_mw;
    c.tnp_mw = tnp_mw;
    c.objective = w.alpha * tl_ms + w.beta * tpp_mw + w.gamma * tnp_mw;
    return c;
}

}  // namespace iotembed
