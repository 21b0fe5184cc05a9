#pragma once

// Independent solution verifier. Evaluates every constraint family
// directly on the decoded solution, never via the MILP matrix, so it can
// audit solver output as well as externally produced solutions.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "iotembed/cost_model.hpp"
#include "iotembed/domain.hpp"
#include "iotembed/scheme.hpp"
#include "iotembed/solution.hpp"

namespace iotembed {

struct ConstraintCheck {
    std::string constraint;  // family label, e.g. "(27) path disjointness"
    bool pass = true;
    std::string detail;      // violating indices when failed
};

struct CheckReport {
    std::vector<ConstraintCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    const ConstraintCheck* first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
};

namespace detail {

inline bool close(double a, double b, double tol = 1e-6) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::string link_str(DirectedLink l) {
    return "(" + std::to_string(l.first) + "," + std::to_string(l.second) + ")";
}

}  // namespace detail

/// Verifies a decoded solution against the raw request + scheme. The
/// node-level transform is re-applied here, so the caller passes the
/// request as written in the scenario file.
inline CheckReport check_solution(const PhysicalNetwork& net, const ServiceRequest& raw_request,
                                  const SchemeSpec& scheme, const EmbeddingSolution& sol,
                                  const ObjectiveWeights& weights, const LatencyTable& table) {
    const ServiceRequest request = apply_node_scheme(raw_request, scheme.node_level);
    CheckReport report;
    // Families are added while references to earlier entries are still
    // live; reserve enough room that push_back never reallocates.
    report.checks.reserve(32);
    auto family = [&](std::string label) -> ConstraintCheck& {
        report.checks.push_back({std::move(label), true, ""});
        return report.checks.back();
    };
    auto fail = [](ConstraintCheck& c, const std::string& detail) {
        c.pass = false;
        if (!c.detail.empty()) c.detail += "; ";
        c.detail += detail;
    };

    // (5) assignment uniqueness and completeness
    {
        auto& c = family("(5) single embedding per vnode");
        std::set<VnodeKey> expected;
        for (const auto& bp : request.bps)
            for (const auto& v : bp.vnodes) expected.insert({bp.id, v.id});
        for (const auto& key : expected)
            if (!sol.assignment.count(key))
                fail(c, key.first + "/" + key.second + " unassigned");
        for (const auto& [key, node] : sol.assignment) {
            if (!expected.count(key))
                fail(c, "assignment for unknown vnode " + key.first + "/" + key.second);
            else if (!net.has_node(node))
                fail(c, key.first + "/" + key.second + " on unknown node " +
                            std::to_string(node));
        }
        if (!c.pass) return report;  // nothing downstream is meaningful
    }

    // (6) coexistence
    if (scheme.coexistence) {
        auto& c = family("(6) coexistence");
        std::map<std::pair<std::string, NodeId>, int> count;
        for (const auto& [key, node] : sol.assignment) ++count[{key.first, node}];
        for (const auto& [k, n] : count)
            if (n > 1)
                fail(c, "BP " + k.first + " places " + std::to_string(n) +
                            " vnodes on node " + std::to_string(k.second));
    }

    // (9)/(10) processing capacities
    {
        auto& c9 = family("(9) MCU capacity");
        auto& c10 = family("(10) RAM capacity");
        std::map<NodeId, double> mcu, ram;
        for (const auto& bp : request.bps)
            for (const auto& v : bp.vnodes) {
                NodeId n = sol.assignment.at({bp.id, v.id});
                mcu[n] += v.mcu_demand;
                ram[n] += v.ram_demand;
            }
        for (const auto& [n, used] : mcu)
            if (used > net.node(n).mcu_capacity + 1e-9)
                fail(c9, "node " + std::to_string(n) + " MCU overloaded");
        for (const auto& [n, used] : ram)
            if (used > net.node(n).ram_capacity + 1e-9)
                fail(c10, "node " + std::to_string(n) + " RAM overloaded");
    }

    // (11)-(14) function and zone matching
    {
        auto& cf = family("(11)-(12) function matching");
        auto& cz = family("(13)-(14) zone matching");
        for (const auto& bp : request.bps)
            for (const auto& v : bp.vnodes) {
                const auto& host = net.node(sol.assignment.at({bp.id, v.id}));
                if (!host.functions.count(v.required_function))
                    fail(cf, bp.id + "/" + v.id + " on node " + std::to_string(host.id) +
                                 " lacking '" + v.required_function + "'");
                if (v.required_zone != kAnyZone && host.zone != v.required_zone)
                    fail(cz, bp.id + "/" + v.id + " requires zone " + v.required_zone +
                                 ", hosted in " + host.zone);
            }
    }

    const auto all_demands = commodity_demands(request, sol.assignment);
    std::map<DirectedLink, double> demands;
    for (const auto& [cd, d] : all_demands)
        if (d > 0) demands[cd] = d;

    // (16) commodity coverage
    {
        auto& c = family("(16) commodity traffic matrix");
        for (const auto& [cd, d] : demands)
            if (!sol.routes1.count(cd))
                fail(c, "commodity " + detail::link_str(cd) + " has no primary route");
        for (const auto& [cd, p] : sol.routes1)
            if (!demands.count(cd))
                fail(c, "route for non-commodity " + detail::link_str(cd));
    }

    auto check_path = [&](ConstraintCheck& c, DirectedLink cd, const Path& p) {
        if (p.size() < 2 || p.front() != cd.first || p.back() != cd.second) {
            fail(c, "route " + detail::link_str(cd) + " endpoints mismatch");
            return;
        }
        std::set<NodeId> seen;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!seen.insert(p[i]).second)
                fail(c, "route " + detail::link_str(cd) + " revisits node " +
                            std::to_string(p[i]));
            if (i + 1 < p.size() && !net.has_link(p[i], p[i + 1]))
                fail(c, "route " + detail::link_str(cd) + " uses nonexistent link " +
                            detail::link_str({p[i], p[i + 1]}));
        }
    };

    const bool str = scheme.traffic_mode == TrafficMode::STR;
    {
        auto& c = family(str ? "(35) primary flow conservation"
                             : "(17) primary flow conservation");
        auto& csplit = family("(21) primary no-split");
        for (const auto& [cd, p] : sol.routes1) {
            check_path(c, cd, p);
            (void)csplit;  // simple-path check above covers the no-split rule
        }
    }

    if (scheme.dual_path()) {
        auto& c = family(str ? "(36) secondary flow conservation"
                             : "(22) secondary flow conservation");
        auto& csplit = family("(26) secondary no-split");
        (void)csplit;
        for (const auto& [cd, d] : demands)
            if (!sol.routes2.count(cd))
                fail(c, "commodity " + detail::link_str(cd) + " has no secondary route");
        for (const auto& [cd, p] : sol.routes2) check_path(c, cd, p);

        auto& cdj = family("(27) path disjointness");
        for (const auto& [cd, p1] : sol.routes1) {
            auto it = sol.routes2.find(cd);
            if (it == sol.routes2.end()) continue;
            std::set<DirectedLink> links1;
            for (std::size_t i = 0; i + 1 < p1.size(); ++i)
                links1.insert({p1[i], p1[i + 1]});
            const auto& p2 = it->second;
            for (std::size_t i = 0; i + 1 < p2.size(); ++i)
                if (links1.count({p2[i], p2[i + 1]}))
                    fail(cdj, "commodity " + detail::link_str(cd) + " shares link " +
                                  detail::link_str({p2[i], p2[i + 1]}));
        }
    } else if (!sol.routes2.empty()) {
        auto& c = family("(22) secondary flow conservation");
        fail(c, "secondary routes present for a single-path scheme");
    }

    // (18)/(23) link traffic identities, (35)/(36) per-path flow scaling
    {
        auto& c18 = family("(18) primary link traffic matrix");
        auto& c23 = family("(23) secondary link traffic matrix");
        auto& cstr = family("(35)-(36) STR half-demand flows");
        LinkTraffic t1, t2;
        for (const auto& [cd, d] : demands) {
            auto it1 = sol.routes1.find(cd);
            if (it1 != sol.routes1.end())
                add_path_traffic(t1, it1->second, scheme.primary_scale() * d);
            auto it2 = sol.routes2.find(cd);
            if (it2 != sol.routes2.end())
                add_path_traffic(t2, it2->second, scheme.secondary_scale() * d);
        }
        auto compare = [&](ConstraintCheck& c, const LinkTraffic& expect,
                           const LinkTraffic& got, const char* which) {
            std::set<DirectedLink> keys;
            for (const auto& [k, v] : expect)
                if (v != 0) keys.insert(k);
            for (const auto& [k, v] : got)
                if (v != 0) keys.insert(k);
            for (const auto& k : keys) {
                double e = expect.count(k) ? expect.at(k) : 0.0;
                double g = got.count(k) ? got.at(k) : 0.0;
                if (!detail::close(e, g))
                    fail(c, std::string(which) + " traffic on " + detail::link_str(k) +
                                " is " + std::to_string(g) + ", expected " +
                                std::to_string(e));
            }
        };
        compare(c18, t1, sol.link_traffic1, "primary");
        compare(c23, t2, sol.link_traffic2, "secondary");
        if (str) {
            // Each commodity's per-path flow must be exactly half the demand.
            for (const auto& [cd, d] : demands) {
                for (const auto* routes : {&sol.routes1, &sol.routes2}) {
                    auto it = routes->find(cd);
                    if (it == routes->end() || it->second.size() < 2) continue;
                    const auto& tm = routes == &sol.routes1 ? sol.link_traffic1
                                                            : sol.link_traffic2;
                    DirectedLink first{it->second[0], it->second[1]};
                    double flow = tm.count(first) ? tm.at(first) : 0.0;
                    // subtract overlapping commodities sharing the link
                    double others = 0.0;
                    for (const auto& [ocd, od] : demands) {
                        if (ocd == cd) continue;
                        auto oit = routes->find(ocd);
                        if (oit == routes->end()) continue;
                        const auto& op = oit->second;
                        for (std::size_t i = 0; i + 1 < op.size(); ++i)
                            if (DirectedLink{op[i], op[i + 1]} == first) others += 0.5 * od;
                    }
                    if (!detail::close(flow - others, 0.5 * d))
                        fail(cstr, "commodity " + detail::link_str(cd) +
                                       " per-path flow != 0.5*demand");
                }
            }
        }
    }

    // (30)/(31) arrivals and node capacity
    {
        auto& c30 = family("(30) node arrival identity");
        auto& c31 = family("(31) node traffic capacity");
        auto arrivals = derive_arrivals(sol.link_traffic1, sol.link_traffic2);
        for (const auto& [n, rate] : arrivals) {
            double stored = sol.node_arrivals.count(n) ? sol.node_arrivals.at(n) : 0.0;
            if (!detail::close(rate, stored))
                fail(c30, "node " + std::to_string(n) + " arrival mismatch");
            if (rate > net.node(n).traffic_capacity + 1e-9)
                fail(c31, "node " + std::to_string(n) + " arrival " + std::to_string(rate) +
                              " exceeds capacity");
        }
    }

    // (32)-(34) latency linking and Eq. (1)-(4) cost identities
    {
        auto& c = family("(32)-(34) latency linking");
        auto& cobj = family("(1)-(4) cost identities");
        try {
            EmbeddingSolution ref = sol;
            recompute_solution_costs(ref, net, request, scheme, weights, table);
            if (!detail::close(ref.costs.tl_ms, sol.costs.tl_ms))
                fail(c, "TL recomputation mismatch");
            if (!detail::close(ref.costs.tpp_mw, sol.costs.tpp_mw))
                fail(cobj, "TPP mismatch");
            if (!detail::close(ref.costs.tnp_mw, sol.costs.tnp_mw))
                fail(cobj, "TNP mismatch");
            if (!detail::close(ref.costs.objective, sol.costs.objective))
                fail(cobj, "objective mismatch");
        } catch (const std::exception& e) {
            fail(c, std::string("latency recomputation failed: ") + e.what());
        }
    }

    return report;
}

}  // namespace iotembed
