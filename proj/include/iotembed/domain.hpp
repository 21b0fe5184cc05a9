#pragma once

// Physical and virtual layer data model: IoT nodes/links, business
// processes, scenario validation and seeded topology generation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iotembed {

using NodeId = int;
using DirectedLink = std::pair<NodeId, NodeId>;

struct IoTNode {
    NodeId id = 0;
    double x = 0.0;               // meters
    double y = 0.0;               // meters
    std::string zone;
    std::set<std::string> functions;
    double mcu_capacity = 0.0;    // MHz
    double ram_capacity = 0.0;    // kB
    double idle_cpu_power = 0.0;  // mW
    double max_cpu_power = 0.0;   // mW
    double idle_net_power = 0.0;  // mW
    double traffic_capacity = 0.0;  // kb/s
};

struct IoTLink {
    NodeId from = 0;
    NodeId to = 0;
    double distance = 0.0;          // meters
    double energy_per_bit = 0.0;    // mW per kb/s
    double amplifier_factor = 0.0;  // mW per kb/s per m^2
};

/// Wireless mesh of IoT nodes. Links are held directed, both
/// orientations always present.
class PhysicalNetwork {
public:
    double area_width = 0.0;
    double area_height = 0.0;
    double max_link_distance = 0.0;

    const std::vector<IoTNode>& nodes() const { return nodes_; }
    const std::vector<IoTLink>& links() const { return links_; }

    void add_node(IoTNode n) {
        if (index_.count(n.id))
            throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
        index_[n.id] = nodes_.size();
        nodes_.push_back(std::move(n));
    }

    /// Adds both orientations of an undirected wireless link.
    void add_link(NodeId a, NodeId b, double distance,
                  double energy_per_bit, double amplifier_factor) {
        if (a == b) throw std::invalid_argument("self link at node " + std::to_string(a));
        links_.push_back({a, b, distance, energy_per_bit, amplifier_factor});
        links_.push_back({b, a, distance, energy_per_bit, amplifier_factor});
        link_index_[{a, b}] = links_.size() - 2;
        link_index_[{b, a}] = links_.size() - 1;
        adjacency_[a].insert(b);
        adjacency_[b].insert(a);
    }

    bool has_node(NodeId id) const { return index_.count(id) != 0; }

    const IoTNode& node(NodeId id) const {
        auto it = index_.find(id);
        if (it == index_.end())
            throw std::out_of_range("unknown node id " + std::to_string(id));
        return nodes_[it->second];
    }

    bool has_link(NodeId a, NodeId b) const { return link_index_.count({a, b}) != 0; }

    const IoTLink& link(NodeId a, NodeId b) const {
        auto it = link_index_.find({a, b});
        if (it == link_index_.end())
            throw std::out_of_range("unknown link " + std::to_string(a) + "->" + std::to_string(b));
        return links_[it->second];
    }

    /// Link-adjacent nodes of `id` (PN_c), ascending by id.
    std::vector<NodeId> neighbors(NodeId id) const {
        if (!has_node(id))
            throw std::out_of_range("unknown node id " + std::to_string(id));
        auto it = adjacency_.find(id);
        if (it == adjacency_.end()) return {};
        return {it->second.begin(), it->second.end()};
    }

    bool connected() const {
        if (nodes_.empty()) return true;
        std::set<NodeId> seen{nodes_.front().id};
        std::vector<NodeId> stack{nodes_.front().id};
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : neighbors(u))
                if (seen.insert(v).second) stack.push_back(v);
        }
        return seen.size() == nodes_.size();
    }

private:
    std::vector<IoTNode> nodes_;
    std::vector<IoTLink> links_;
    std::map<NodeId, std::size_t> index_;
    std::map<DirectedLink, std::size_t> link_index_;
    std::map<NodeId, std::set<NodeId>> adjacency_;
};

enum class VnodeKind { Sensor, Actuator, Controller, Storage, Other };

inline const char* to_string(VnodeKind k) {
    switch (k) {
        case VnodeKind::Sensor: return "sensor";
        case VnodeKind::Actuator: return "actuator";
        case VnodeKind::Controller: return "controller";
        case VnodeKind::Storage: return "storage";
        default: return "other";
    }
}

inline VnodeKind vnode_kind_from_string(const std::string& s) {
    if (s == "sensor") return VnodeKind::Sensor;
    if (s == "actuator") return VnodeKind::Actuator;
    if (s == "controller") return VnodeKind::Controller;
    if (s == "storage") return VnodeKind::Storage;
    if (s == "other") return VnodeKind::Other;
    throw std::invalid_argument("unknown vnode kind: " + s);
}

/// Zone wildcard: the virtual node may be placed in any zone.
inline constexpr const char* kAnyZone = "*";

struct VirtualNode {
    std::string id;  // unique within its BP
    VnodeKind kind = VnodeKind::Other;
    std::string required_function;
    std::string required_zone = kAnyZone;
    double mcu_demand = 0.0;  // MHz
    double ram_demand = 0.0;  // kB
};

struct VirtualLink {
    std::string from;
    std::string to;
    double traffic_demand = 0.0;  // kb/s
};

struct BusinessProcess {
    std::string id;
    std::vector<VirtualNode> vnodes;
    std::vector<VirtualLink> vlinks;

    const VirtualNode* find_vnode(const std::string& vid) const {
        for (const auto& v : vnodes)
            if (v.id == vid) return &v;
        return nullptr;
    }
};

struct ServiceRequest {
    std::vector<BusinessProcess> bps;

    std::size_t vnode_count() const {
        std::size_t n = 0;
        for (const auto& bp : bps) n += bp.vnodes.size();
        return n;
    }
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    std::string path;     // e.g. "network.links[3]"
    std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Checks every type invariant of the physical network and the service
/// request. Violations are data, not failures: an empty report means valid.
inline ValidationReport validate_scenario(const PhysicalNetwork& net,
                                          const ServiceRequest& req) {
    ValidationReport out;
    auto fail = [&](std::string path, std::string msg) {
        out.push_back({std::move(path), std::move(msg)});
    };

    if (net.area_width <= 0 || net.area_height <= 0)
        fail("network.area", "area dimensions must be positive");

    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        const auto& n = net.nodes()[i];
        std::string p = "network.nodes[" + std::to_string(i) + "]";
        if (n.mcu_capacity <= 0) fail(p, "mcu_capacity must be > 0");
        if (n.ram_capacity <= 0) fail(p, "ram_capacity must be > 0");
        if (n.traffic_capacity <= 0) fail(p, "traffic_capacity must be > 0");
        if (n.idle_cpu_power > n.max_cpu_power)
            fail(p, "idle_cpu_power exceeds max_cpu_power");
        if (n.x < 0 || n.x > net.area_width || n.y < 0 || n.y > net.area_height)
            fail(p, "position outside deployment area");
    }

    for (std::size_t i = 0; i < net.links().size(); ++i) {
        const auto& l = net.links()[i];
        std::string p = "network.links[" + std::to_string(i) + "]";
        if (l.from == l.to) fail(p, "link endpoints must be distinct");
        if (l.distance <= 0) fail(p, "distance must be > 0");
        if (l.distance > net.max_link_distance)
            fail(p, "distance " + std::to_string(l.distance) +
                        " exceeds max_link_distance " +
                        std::to_string(net.max_link_distance));
        if (!net.has_link(l.to, l.from))
            fail(p, "reverse orientation missing");
        if (net.has_node(l.from) && net.has_node(l.to)) {
            const auto& a = net.node(l.from);
            const auto& b = net.node(l.to);
            double d = std::hypot(a.x - b.x, a.y - b.y);
            double tol = 1e-9 * std::max(1.0, d);
            if (std::abs(d - l.distance) > tol)
                fail(p, "stored distance disagrees with endpoint geometry");
        } else {
            fail(p, "link endpoint references unknown node");
        }
    }

    for (std::size_t i = 0; i < req.bps.size(); ++i) {
        const auto& bp = req.bps[i];
        std::string bpp = "services.bps[" + std::to_string(i) + "]";
        std::set<std::string> ids;
        for (std::size_t j = 0; j < bp.vnodes.size(); ++j) {
            const auto& v = bp.vnodes[j];
            std::string p = bpp + ".vnodes[" + std::to_string(j) + "]";
            if (!ids.insert(v.id).second) fail(p, "duplicate vnode id " + v.id);
            if (v.mcu_demand < 0) fail(p, "mcu_demand must be >= 0");
            if (v.ram_demand < 0) fail(p, "ram_demand must be >= 0");
        }
        for (std::size_t j = 0; j < bp.vlinks.size(); ++j) {
            const auto& l = bp.vlinks[j];
            std::string p = bpp + ".vlinks[" + std::to_string(j) + "]";
            if (l.traffic_demand < 0) fail(p, "traffic_demand must be >= 0");
            if (l.from == l.to) fail(p, "virtual link endpoints must be distinct");
            if (!ids.count(l.from))
                fail(p, "dangling endpoint " + l.from);
            if (!ids.count(l.to))
                fail(p, "dangling endpoint " + l.to);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Seeded topology generation

/// Per-node/link parameter defaults applied by the generator. MCU rows
/// cycle through five low-power processor profiles by node id.
struct TopologyDefaults {
    double energy_per_bit = 0.05;       // mW per kb/s  (50 nJ/bit)
    double amplifier_factor = 2.55e-4;  // mW per kb/s per m^2  (255 pJ/bit.m^2)
    double traffic_capacity = 250.0;    // kb/s
    double idle_net_power = 1.0;        // mW
    double ram_capacity = 64.0;         // kB
    std::vector<std::string> functions = {"sense", "process", "store", "actuate"};
    int zone_grid = 2;                  // zones form a zone_grid x zone_grid partition
};

struct McuProfile {
    const char* name;
    double clk_mhz;
    double idle_mw;
    double max_mw;
};

/// Processing module profiles, cycled in order of node id.
inline const std::vector<McuProfile>& mcu_profiles() {
    static const std::vector<McuProfile> rows = {
        {"MSP430F1", 8.0, 1.0, 8.0},
        {"MSP430FR5", 16.0, 1.0, 14.0},
        {"MSP430FR6", 16.0, 1.0, 20.0},
        {"MSP430F5", 25.0, 1.0, 14.0},
        {"MSP432P4", 48.0, 1.0, 16.0},
    };
    return rows;
}

/// Uniform double in [0,1) from a fixed-width engine; avoids the
/// implementation-defined std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Places `n_nodes` uniformly at random in the area and links every pair
/// within `max_link_distance`. Deterministic for a fixed seed. Throws
/// TopologyError if the draw is disconnected (retry with a new seed).
inline PhysicalNetwork generate_topology(std::uint64_t seed, int n_nodes,
                                         double area_w, double area_h,
                                         double max_link_distance,
                                         const TopologyDefaults& defs = {}) {
    if (n_nodes < 2) throw std::invalid_argument("n_nodes must be >= 2");
    if (area_w <= 0 || area_h <= 0) throw std::invalid_argument("area dimensions must be > 0");

    std::mt19937_64 rng(seed);
    PhysicalNetwork net;
    net.area_width = area_w;
    net.area_height = area_h;
    net.max_link_distance = max_link_distance;

    const auto& rows = mcu_profiles();
    for (int i = 0; i < n_nodes; ++i) {
        IoTNode n;
        n.id = i;
        n.x = uniform01(rng) * area_w;
        n.y = uniform01(rng) * area_h;
        int zx = std::min(defs.zone_grid - 1, static_cast<int>(n.x / area_w * defs.zone_grid));
        int zy = std::min(defs.zone_grid - 1, static_cast<int>(n.y / area_h * defs.zone_grid));
        n.zone = "z" + std::to_string(zx) + std::to_string(zy);
        n.functions.insert(defs.functions.begin(), defs.functions.end());
        const auto& row = rows[static_cast<std::size_t>(i) % rows.size()];
        n.mcu_capacity = row.clk_mhz;
        n.idle_cpu_power = row.idle_mw;
        n.max_cpu_power = row.max_mw;
        n.ram_capacity = defs.ram_capacity;
        n.idle_net_power = defs.idle_net_power;
        n.traffic_capacity = defs.traffic_capacity;
        net.add_node(std::move(n));
    }

    for (int a = 0; a < n_nodes; ++a) {
        for (int b = a + 1; b < n_nodes; ++b) {
            const auto& na = net.node(a);
            const auto& nb = net.node(b);
            double d = std::hypot(na.x - nb.x, na.y - nb.y);
            if (d > 0 && d <= max_link_distance)
                net.add_link(a, b, d, defs.energy_per_bit, defs.amplifier_factor);
        }
    }

    if (!net.connected())
        throw TopologyError("generated network is disconnected; retry with a new seed");
    return net;
}

// ---------------------------------------------------------------------------
// Seeded service generation (test/benchmark plumbing)

struct ServiceGenConfig {
    int n_bps = 1;
    int vnodes_per_bp = 3;     // 2 = sensor->controller, 3 = sensor->controller->actuator
    double demand_min = 30.0;  // kb/s
    double demand_max = 60.0;
    double mcu_min = 1.0;      // MHz
    double mcu_max = 4.0;
    double ram_min = 1.0;      // kB
    double ram_max = 8.0;
};

/// Chain-shaped business processes with uniformly drawn demands.
/// All zone requirements are wildcarded so generated scenarios stay
/// feasible on any connected topology with spare capacity.
inline ServiceRequest generate_services(std::uint64_t seed, const ServiceGenConfig& cfg = {}) {
    if (cfg.n_bps < 0 || cfg.vnodes_per_bp < 2 || cfg.vnodes_per_bp > 3)
        throw std::invalid_argument("unsupported service generator configuration");
    std::mt19937_64 rng(seed ^ 0x5eaa11ce5ULL);
    auto unif = [&](double lo, double hi) { return lo + uniform01(rng) * (hi - lo); };

    static const char* kChainFuncs[3] = {"sense", "process", "actuate"};
    static const VnodeKind kChainKinds[3] = {VnodeKind::Sensor, VnodeKind::Controller,
                                             VnodeKind::Actuator};

    ServiceRequest req;
    for (int b = 0; b < cfg.n_bps; ++b) {
        BusinessProcess bp;
        bp.id = "bp" + std::to_string(b);
        for (int v = 0; v < cfg.vnodes_per_bp; ++v) {
            VirtualNode vn;
            vn.id = "v" + std::to_string(v);
            vn.kind = kChainKinds[v];
            vn.required_function = kChainFuncs[v];
            vn.required_zone = kAnyZone;
            vn.mcu_demand = unif(cfg.mcu_min, cfg.mcu_max);
            vn.ram_demand = unif(cfg.ram_min, cfg.ram_max);
            bp.vnodes.push_back(std::move(vn));
        }
        for (int v = 0; v + 1 < cfg.vnodes_per_bp; ++v)
            bp.vlinks.push_back({"v" + std::to_string(v), "v" + std::to_string(v + 1),
                                 unif(cfg.demand_min, cfg.demand_max)});
        req.bps.push_back(std::move(bp));
    }
    return req;
}

}  // namespace iotembed
