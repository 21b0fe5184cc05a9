#pragma once

// Scenario and solution (de)serialization. Scenario files are a single
// JSON document with "network" and "services" top-level keys and an
// optional "latency_table" override; unknown keys are rejected.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "iotembed/checker.hpp"
#include "iotembed/cost_model.hpp"
#include "iotembed/domain.hpp"
#include "iotembed/solution.hpp"

namespace iotembed {

using nlohmann::json;

struct Scenario {
    PhysicalNetwork network;
    ServiceRequest services;
    std::optional<LatencyTable> latency_table;  // file-level override
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace io_detail {

inline void expect_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected a JSON object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ParseError(where + ": unknown key \"" + key + "\"");
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing key \"" + key + "\"");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(where + "." + key + ": " + e.what());
    }
}

}  // namespace io_detail

inline Scenario scenario_from_json(const json& j) {
    using io_detail::expect_keys;
    using io_detail::get;
    expect_keys(j, {"network", "services", "latency_table"}, "scenario");
    Scenario sc;

    const json& jn = j.at("network");
    expect_keys(jn, {"area", "max_link_distance", "nodes", "links"}, "network");
    auto area = get<std::vector<double>>(jn, "area", "network");
    if (area.size() != 2) throw ParseError("network.area: expected [width, height]");
    sc.network.area_width = area[0];
    sc.network.area_height = area[1];
    sc.network.max_link_distance = get<double>(jn, "max_link_distance", "network");

    for (const auto& node : get<json>(jn, "nodes", "network")) {
        expect_keys(node,
                    {"id", "position", "zone", "functions", "mcu_capacity", "ram_capacity",
                     "idle_cpu_power", "max_cpu_power", "idle_net_power", "traffic_capacity"},
                    "network.nodes[]");
        IoTNode n;
        n.id = get<NodeId>(node, "id", "node");
        auto pos = get<std::vector<double>>(node, "position", "node");
        if (pos.size() != 2) throw ParseError("node.position: expected [x, y]");
        n.x = pos[0];
        n.y = pos[1];
        n.zone = get<std::string>(node, "zone", "node");
        for (const auto& f : get<std::vector<std::string>>(node, "functions", "node"))
            n.functions.insert(f);
        n.mcu_capacity = get<double>(node, "mcu_capacity", "node");
        n.ram_capacity = get<double>(node, "ram_capacity", "node");
        n.idle_cpu_power = get<double>(node, "idle_cpu_power", "node");
        n.max_cpu_power = get<double>(node, "max_cpu_power", "node");
        n.idle_net_power = get<double>(node, "idle_net_power", "node");
        n.traffic_capacity = get<double>(node, "traffic_capacity", "node");
        sc.network.add_node(std::move(n));
    }
    for (const auto& link : get<json>(jn, "links", "network")) {
        expect_keys(link, {"from", "to", "distance", "energy_per_bit", "amplifier_factor"},
                    "network.links[]");
        sc.network.add_link(get<NodeId>(link, "from", "link"), get<NodeId>(link, "to", "link"),
                            get<double>(link, "distance", "link"),
                            get<double>(link, "energy_per_bit", "link"),
                            get<double>(link, "amplifier_factor", "link"));
    }

    const json& js = j.at("services");
    expect_keys(js, {"bps"}, "services");
    for (const auto& jbp : get<json>(js, "bps", "services")) {
        expect_keys(jbp, {"id", "vnodes", "vlinks"}, "services.bps[]");
        BusinessProcess bp;
        bp.id = get<std::string>(jbp, "id", "bp");
        for (const auto& jv : get<json>(jbp, "vnodes", "bp")) {
            expect_keys(jv, {"id", "kind", "function", "zone", "mcu", "ram"}, "bp.vnodes[]");
            VirtualNode v;
            v.id = get<std::string>(jv, "id", "vnode");
            v.kind = vnode_kind_from_string(get<std::string>(jv, "kind", "vnode"));
            v.required_function = get<std::string>(jv, "function", "vnode");
            v.required_zone = get<std::string>(jv, "zone", "vnode");
            v.mcu_demand = get<double>(jv, "mcu", "vnode");
            v.ram_demand = get<double>(jv, "ram", "vnode");
            bp.vnodes.push_back(std::move(v));
        }
        for (const auto& jl : get<json>(jbp, "vlinks", "bp")) {
            expect_keys(jl, {"from", "to", "demand"}, "bp.vlinks[]");
            bp.vlinks.push_back({get<std::string>(jl, "from", "vlink"),
                                 get<std::string>(jl, "to", "vlink"),
                                 get<double>(jl, "demand", "vlink")});
        }
        sc.services.bps.push_back(std::move(bp));
    }

    if (j.contains("latency_table")) {
        const json& jt = j.at("latency_table");
        expect_keys(jt, {"capacity", "packet_bytes", "levels"}, "latency_table");
        LatencyTable t;
        t.capacity_kbps = get<double>(jt, "capacity", "latency_table");
        t.packet_bytes = get<double>(jt, "packet_bytes", "latency_table");
        for (const auto& jl : get<json>(jt, "levels", "latency_table")) {
            expect_keys(jl, {"lambda_kbps", "w_ms"}, "latency_table.levels[]");
            t.levels.push_back({get<double>(jl, "lambda_kbps", "level"),
                                get<double>(jl, "w_ms", "level")});
        }
        for (std::size_t i = 1; i < t.levels.size(); ++i)
            if (t.levels[i].lambda_kbps <= t.levels[i - 1].lambda_kbps ||
                t.levels[i].w_ms <= t.levels[i - 1].w_ms)
                throw ParseError("latency_table.levels: must be strictly ascending");
        sc.latency_table = std::move(t);
    }
    return sc;
}

inline json scenario_to_json(const Scenario& sc) {
    json jn;
    jn["area"] = {sc.network.area_width, sc.network.area_height};
    jn["max_link_distance"] = sc.network.max_link_distance;
    jn["nodes"] = json::array();
    for (const auto& n : sc.network.nodes())
        jn["nodes"].push_back({{"id", n.id},
                               {"position", {n.x, n.y}},
                               {"zone", n.zone},
                               {"functions", n.functions},
                               {"mcu_capacity", n.mcu_capacity},
                               {"ram_capacity", n.ram_capacity},
                               {"idle_cpu_power", n.idle_cpu_power},
                               {"max_cpu_power", n.max_cpu_power},
                               {"idle_net_power", n.idle_net_power},
                               {"traffic_capacity", n.traffic_capacity}});
    jn["links"] = json::array();
    for (const auto& l : sc.network.links())
        if (l.from < l.to)  // one canonical row per undirected link
            jn["links"].push_back({{"from", l.from},
                                   {"to", l.to},
                                   {"distance", l.distance},
                                   {"energy_per_bit", l.energy_per_bit},
                                   {"amplifier_factor", l.amplifier_factor}});

    json js;
    js["bps"] = json::array();
    for (const auto& bp : sc.services.bps) {
        json jbp;
        jbp["id"] = bp.id;
        jbp["vnodes"] = json::array();
        for (const auto& v : bp.vnodes)
            jbp["vnodes"].push_back({{"id", v.id},
                                     {"kind", to_string(v.kind)},
                                     {"function", v.required_function},
                                     {"zone", v.required_zone},
                                     {"mcu", v.mcu_demand},
                                     {"ram", v.ram_demand}});
        jbp["vlinks"] = json::array();
        for (const auto& l : bp.vlinks)
            jbp["vlinks"].push_back(
                {{"from", l.from}, {"to", l.to}, {"demand", l.traffic_demand}});
        js["bps"].push_back(std::move(jbp));
    }

    json out;
    out["network"] = std::move(jn);
    out["services"] = std::move(js);
    if (sc.latency_table) {
        json jt;
        jt["capacity"] = sc.latency_table->capacity_kbps;
        jt["packet_bytes"] = sc.latency_table->packet_bytes;
        jt["levels"] = json::array();
        for (const auto& lv : sc.latency_table->levels)
            jt["levels"].push_back({{"lambda_kbps", lv.lambda_kbps}, {"w_ms", lv.w_ms}});
        out["latency_table"] = std::move(jt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solution JSON

inline json solution_to_json(const EmbeddingSolution& sol,
                             const CheckReport* report = nullptr) {
    json out;
    out["scheme"] = sol.scheme;
    out["assignment"] = json::array();
    for (const auto& [key, node] : sol.assignment)
        out["assignment"].push_back({{"bp", key.first}, {"vnode", key.second}, {"node", node}});
    auto routes_json = [](const std::map<DirectedLink, Path>& routes) {
        json arr = json::array();
        for (const auto& [cd, p] : routes)
            arr.push_back({{"from", cd.first}, {"to", cd.second}, {"path", p}});
        return arr;
    };
    out["routes1"] = routes_json(sol.routes1);
    out["routes2"] = routes_json(sol.routes2);
    out["costs"] = {{"tl_ms", sol.costs.tl_ms},
                    {"tpp_mw", sol.costs.tpp_mw},
                    {"tnp_mw", sol.costs.tnp_mw},
                    {"objective", sol.costs.objective}};
    if (report) {
        out["checks"] = json::array();
        for (const auto& c : report->checks)
            out["checks"].push_back(
                {{"constraint", c.constraint}, {"pass", c.pass}, {"detail", c.detail}});
    }
    return out;
}

inline EmbeddingSolution solution_from_json(const json& j) {
    using io_detail::get;
    EmbeddingSolution sol;
    sol.scheme = get<std::string>(j, "scheme", "solution");
    for (const auto& a : get<json>(j, "assignment", "solution"))
        sol.assignment[{get<std::string>(a, "bp", "assignment"),
                        get<std::string>(a, "vnode", "assignment")}] =
            get<NodeId>(a, "node", "assignment");
    auto load_routes = [&](const char* key, std::map<DirectedLink, Path>& routes) {
        for (const auto& r : get<json>(j, key, "solution"))
            routes[{get<NodeId>(r, "from", key), get<NodeId>(r, "to", key)}] =
                get<Path>(r, "path", key);
    };
    load_routes("routes1", sol.routes1);
    load_routes("routes2", sol.routes2);
    const json& jc = j.at("costs");
    sol.costs.tl_ms = get<double>(jc, "tl_ms", "costs");
    sol.costs.tpp_mw = get<double>(jc, "tpp_mw", "costs");
    sol.costs.tnp_mw = get<double>(jc, "tnp_mw", "costs");
    sol.costs.objective = get<double>(jc, "objective", "costs");
    return sol;
}

// ---------------------------------------------------------------------------
// Files

inline Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

inline std::string scenario_to_text(const Scenario& sc) {
    return scenario_to_json(sc).dump(2) + "\n";
}

}  // namespace iotembed
