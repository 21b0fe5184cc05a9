#pragma once

// Resilience scheme selection: node-level request transforms (CCNR/PRNR/
// FRNR) and traffic-mode semantics (retransmission, backup path with
// keep-alive, replication, 50-50 splitting).

#include <stdexcept>
#include <string>

#include "iotembed/domain.hpp"

namespace iotembed {

enum class NodeResilience { CCNR, PRNR, FRNR };
enum class TrafficMode { SingleRetransmit, RDTR, RPTR, STR };

inline const char* to_string(NodeResilience r) {
    switch (r) {
        case NodeResilience::CCNR: return "CCNR";
        case NodeResilience::PRNR: return "PRNR";
        default: return "FRNR";
    }
}

inline const char* to_string(TrafficMode m) {
    switch (m) {
        case TrafficMode::SingleRetransmit: return "RETX";
        case TrafficMode::RDTR: return "RDTR";
        case TrafficMode::RPTR: return "RPTR";
        default: return "STR";
    }
}

struct SchemeSpec {
    NodeResilience node_level = NodeResilience::CCNR;
    TrafficMode traffic_mode = TrafficMode::SingleRetransmit;
    double keep_alive_fraction = 0.01;  // of demand, sustained on the backup path
    bool coexistence = true;            // anti-colocation within each BP

    bool dual_path() const { return traffic_mode != TrafficMode::SingleRetransmit; }

    /// No-failure traffic carried by the primary path as a fraction of demand.
    double primary_scale() const {
        return traffic_mode == TrafficMode::STR ? 0.5 : 1.0;
    }

    /// No-failure traffic carried by the secondary path as a fraction of demand.
    double secondary_scale() const {
        switch (traffic_mode) {
            case TrafficMode::SingleRetransmit: return 0.0;
            case TrafficMode::RDTR: return keep_alive_fraction;
            case TrafficMode::RPTR: return 1.0;
            default: return 0.5;  // STR
        }
    }

    std::string name() const {
        std::string s = to_string(node_level);
        if (traffic_mode != TrafficMode::SingleRetransmit)
            s += std::string("+") + to_string(traffic_mode);
        return s;
    }

    /// Parses names like "CCNR", "FRNR+STR", "PRNR+RDTR".
    static SchemeSpec parse(const std::string& text) {
        SchemeSpec s;
        std::string head = text, tail;
        if (auto pos = text.find('+'); pos != std::string::npos) {
            head = text.substr(0, pos);
            tail = text.substr(pos + 1);
        }
        if (head == "CCNR") s.node_level = NodeResilience::CCNR;
        else if (head == "PRNR") s.node_level = NodeResilience::PRNR;
        else if (head == "FRNR") s.node_level = NodeResilience::FRNR;
        else throw std::invalid_argument("unknown node resilience level: " + head);
        if (tail.empty() || tail == "RETX") s.traffic_mode = TrafficMode::SingleRetransmit;
        else if (tail == "RDTR") s.traffic_mode = TrafficMode::RDTR;
        else if (tail == "RPTR") s.traffic_mode = TrafficMode::RPTR;
        else if (tail == "STR") s.traffic_mode = TrafficMode::STR;
        else throw std::invalid_argument("unknown traffic mode: " + tail);
        return s;
    }
};

namespace detail {

/// Duplicates one vnode inside a BP, copying its requirements and every
/// currently incident virtual link with equal demand. Replicas stay in
/// the same BP, so the coexistence constraint forces anti-colocation.
inline void duplicate_vnode(BusinessProcess& bp, const std::string& vid) {
    const VirtualNode* orig = bp.find_vnode(vid);
    if (!orig) return;
    VirtualNode replica = *orig;
    replica.id = vid + "_r";
    bp.vnodes.push_back(replica);
    std::vector<VirtualLink> added;
    for (const auto& l : bp.vlinks) {
        if (l.from == vid) added.push_back({replica.id, l.to, l.traffic_demand});
        if (l.to == vid) added.push_back({l.from, replica.id, l.traffic_demand});
    }
    bp.vlinks.insert(bp.vlinks.end(), added.begin(), added.end());
}

}  // namespace detail

/// CCNR leaves the request untouched; PRNR duplicates sensors and
/// actuators; FRNR duplicates every vnode. Vnodes are processed in
/// declaration order, each duplication copying the incident links
/// present at that point.
inline ServiceRequest apply_node_scheme(const ServiceRequest& req, NodeResilience level) {
    if (level == NodeResilience::CCNR) return req;
    ServiceRequest out = req;
    for (auto& bp : out.bps) {
        std::vector<std::string> to_dup;
        for (const auto& v : bp.vnodes) {
            bool dup = level == NodeResilience::FRNR ||
                       v.kind == VnodeKind::Sensor || v.kind == VnodeKind::Actuator;
            if (dup) to_dup.push_back(v.id);
        }
        for (const auto& vid : to_dup) detail::duplicate_vnode(bp, vid);
    }
    return out;
}

}  // namespace iotembed
