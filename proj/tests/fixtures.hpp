#pragma once

// Hand-built networks and requests shared across the test suite. All
// geometry is consistent (stored distances equal endpoint distances) so
// the fixtures also pass validate_scenario.

#include "iotembed/cost_model.hpp"
#include "iotembed/domain.hpp"

namespace fixtures {

inline iotembed::IoTNode make_node(int id, double x, double y, double mcu = 48.0,
                                   double max_cpu = 16.0) {
    iotembed::IoTNode n;
    n.id = id;
    n.x = x;
    n.y = y;
    n.zone = "z00";
    n.functions = {"sense", "process", "store", "actuate"};
    n.mcu_capacity = mcu;
    n.ram_capacity = 64.0;
    n.idle_cpu_power = 1.0;
    n.max_cpu_power = max_cpu;
    n.idle_net_power = 1.0;
    n.traffic_capacity = 250.0;
    return n;
}

/// Three fully linked nodes at 0(0,0), 1(60,0), 2(0,80).
inline iotembed::PhysicalNetwork triangle_net() {
    iotembed::PhysicalNetwork net;
    net.area_width = 100.0;
    net.area_height = 100.0;
    net.max_link_distance = 100.0;
    net.add_node(make_node(0, 0, 0));
    net.add_node(make_node(1, 60, 0));
    net.add_node(make_node(2, 0, 80));
    net.add_link(0, 1, 60.0, 0.05, 2.55e-4);
    net.add_link(0, 2, 80.0, 0.05, 2.55e-4);
    net.add_link(1, 2, 100.0, 0.05, 2.55e-4);
    return net;
}

/// Four nodes on a square with only the sides linked: two link-disjoint
/// paths 0-1-3 and 0-2-3 between opposite corners. Per-unit path costs
/// are asymmetric: 1.4 via node 1, 1.6 via node 2 (amplifiers zeroed).
inline iotembed::PhysicalNetwork diamond_net() {
    iotembed::PhysicalNetwork net;
    net.area_width = 100.0;
    net.area_height = 100.0;
    net.max_link_distance = 60.0;
    for (int i = 0; i < 4; ++i)
        net.add_node(make_node(i, (i & 1) * 50.0, (i >> 1) * 50.0));
    net.add_link(0, 1, 50.0, 0.35, 0.0);
    net.add_link(1, 3, 50.0, 0.35, 0.0);
    net.add_link(0, 2, 50.0, 0.40, 0.0);
    net.add_link(2, 3, 50.0, 0.40, 0.0);
    return net;
}

/// Line 0-1-2: no link-disjoint path pair exists between 0 and 2.
inline iotembed::PhysicalNetwork line_net() {
    iotembed::PhysicalNetwork net;
    net.area_width = 200.0;
    net.area_height = 100.0;
    net.max_link_distance = 60.0;
    net.add_node(make_node(0, 0, 0));
    net.add_node(make_node(1, 50, 0));
    net.add_node(make_node(2, 100, 0));
    net.add_link(0, 1, 50.0, 0.05, 2.55e-4);
    net.add_link(1, 2, 50.0, 0.05, 2.55e-4);
    return net;
}

/// One BP, sensor -> controller chain with the given demand.
inline iotembed::ServiceRequest chain2(double demand = 50.0, double mcu0 = 2.0,
                                       double mcu1 = 3.0) {
    iotembed::BusinessProcess bp;
    bp.id = "bp0";
    bp.vnodes.push_back({"v0", iotembed::VnodeKind::Sensor, "sense", iotembed::kAnyZone,
                         mcu0, 2.0});
    bp.vnodes.push_back({"v1", iotembed::VnodeKind::Controller, "process",
                         iotembed::kAnyZone, mcu1, 2.0});
    bp.vlinks.push_back({"v0", "v1", demand});
    iotembed::ServiceRequest req;
    req.bps.push_back(std::move(bp));
    return req;
}

/// One BP, sensor -> controller -> actuator chain.
inline iotembed::ServiceRequest chain3(double d01 = 40.0, double d12 = 30.0) {
    iotembed::BusinessProcess bp;
    bp.id = "bp0";
    bp.vnodes.push_back({"v0", iotembed::VnodeKind::Sensor, "sense", iotembed::kAnyZone,
                         2.0, 2.0});
    bp.vnodes.push_back({"v1", iotembed::VnodeKind::Controller, "process",
                         iotembed::kAnyZone, 3.0, 2.0});
    bp.vnodes.push_back({"v2", iotembed::VnodeKind::Actuator, "actuate",
                         iotembed::kAnyZone, 1.0, 2.0});
    bp.vlinks.push_back({"v0", "v1", d01});
    bp.vlinks.push_back({"v1", "v2", d12});
    iotembed::ServiceRequest req;
    req.bps.push_back(std::move(bp));
    return req;
}

inline iotembed::LatencyTable default_table() {
    return iotembed::build_latency_table(250.0, 128.0, 25.0);
}

}  // namespace fixtures
