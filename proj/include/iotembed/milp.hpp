#pragma once

// Solver-agnostic MILP representation and the model compiler mapping a
// scenario + scheme onto the embedding formulation: node embedding,
// link-embedding linearization, primary/secondary flows, activation
// indicators, arrival-rate discretization and the weighted objective.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iotembed/cost_model.hpp"
#include "iotembed/domain.hpp"
#include "iotembed/scheme.hpp"

namespace iotembed {

enum class VarKind { Binary, NonNegContinuous };
enum class Rel { LE, EQ, GE };

struct MilpVar {
    std::string name;
    VarKind kind = VarKind::NonNegContinuous;
    std::optional<double> upper;
};

struct LinearTerm {
    double coeff;
    int var;
};

struct LinearExpr {
    std::vector<LinearTerm> terms;

    LinearExpr& add(double coeff, int var) {
        if (coeff != 0.0) terms.push_back({coeff, var});
        return *this;
    }
};

struct MilpConstraint {
    std::string name;
    LinearExpr lhs;
    Rel rel = Rel::LE;
    double rhs = 0.0;
    std::string tag;  // source constraint number "5".."36", or "aux"
};

struct MilpInstance {
    std::vector<MilpVar> variables;
    std::vector<MilpConstraint> constraints;
    LinearExpr objective;  // minimize
    double big_m = 1e8;
    std::vector<std::string> infeasibility_hints;

    int add_var(std::string name, VarKind kind, std::optional<double> upper = {}) {
        variables.push_back({std::move(name), kind, upper});
        return static_cast<int>(variables.size()) - 1;
    }

    void add_constraint(std::string name, LinearExpr lhs, Rel rel, double rhs,
                        std::string tag) {
        constraints.push_back({std::move(name), std::move(lhs), rel, rhs, std::move(tag)});
    }

    /// Structural well-formedness: declared variables only, known tags.
    void validate() const {
        static const std::set<std::string> numeric = [] {
            std::set<std::string> s;
            for (int i = 5; i <= 36; ++i) s.insert(std::to_string(i));
            return s;
        }();
        auto check_expr = [this](const LinearExpr& e) {
            for (const auto& t : e.terms)
                if (t.var < 0 || t.var >= static_cast<int>(variables.size()))
                    throw std::logic_error("constraint references undeclared variable");
        };
        for (const auto& c : constraints) {
            check_expr(c.lhs);
            if (c.tag != "aux" && !numeric.count(c.tag))
                throw std::logic_error("unknown provenance tag: " + c.tag);
        }
        check_expr(objective);
    }
};

namespace detail {

inline std::string sanitize(const std::string& s) {
    std::string out;
    for (char ch : s)
        out += (std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_');
    return out;
}

}  // namespace detail

/// Compiles a scenario + scheme into the generic MILP. The node-level
/// transform is applied first, so the instance reflects the redundant
/// request. Missing functions/zones surface as infeasibility hints.
inline MilpInstance compile(const PhysicalNetwork& net, const ServiceRequest& raw_request,
                            const SchemeSpec& scheme, const ObjectiveWeights& weights,
                            const LatencyTable& table) {
    const ServiceRequest request = apply_node_scheme(raw_request, scheme.node_level);
    MilpInstance m;
    const double M = m.big_m;
    const bool dual = scheme.dual_path();
    const double supply = scheme.traffic_mode == TrafficMode::STR ? 0.5 : 1.0;

    const auto& nodes = net.nodes();
    std::vector<DirectedLink> dlinks;
    for (const auto& l : net.links()) dlinks.push_back({l.from, l.to});
    std::sort(dlinks.begin(), dlinks.end());

    std::vector<DirectedLink> pairs;  // all ordered node pairs (c,d), c != d
    for (const auto& c : nodes)
        for (const auto& d : nodes)
            if (c.id != d.id) pairs.push_back({c.id, d.id});

    // --- variables -------------------------------------------------------
    std::map<std::tuple<std::string, std::string, NodeId>, int> ne;
    for (const auto& bp : request.bps)
        for (const auto& v : bp.vnodes)
            for (const auto& n : nodes)
                ne[{bp.id, v.id, n.id}] = m.add_var(
                    "NE_" + detail::sanitize(bp.id) + "_" + detail::sanitize(v.id) + "_" +
                        std::to_string(n.id),
                    VarKind::Binary);

    std::map<NodeId, int> ipm, itm;
    for (const auto& n : nodes) {
        ipm[n.id] = m.add_var("IPM_" + std::to_string(n.id), VarKind::Binary);
        itm[n.id] = m.add_var("ITM_" + std::to_string(n.id), VarKind::Binary);
    }

    // Function / zone indicators, instantiated for the requirement each
    // vnode actually declares.
    std::map<std::tuple<std::string, std::string, NodeId>, int> fvar, zvar;
    for (const auto& bp : request.bps)
        for (const auto& v : bp.vnodes)
            for (const auto& n : nodes) {
                fvar[{bp.id, v.id, n.id}] = m.add_var(
                    "F_" + detail::sanitize(bp.id) + "_" + detail::sanitize(v.id) + "_" +
                        std::to_string(n.id),
                    VarKind::Binary);
                if (v.required_zone != kAnyZone)
                    zvar[{bp.id, v.id, n.id}] = m.add_var(
                        "Z_" + detail::sanitize(bp.id) + "_" + detail::sanitize(v.id) + "_" +
                            std::to_string(n.id),
                        VarKind::Binary);
            }

    struct VlinkRef {
        const BusinessProcess* bp;
        const VirtualLink* vl;
        std::size_t idx;
    };
    std::vector<VlinkRef> vlinks;
    for (const auto& bp : request.bps)
        for (std::size_t k = 0; k < bp.vlinks.size(); ++k)
            vlinks.push_back({&bp, &bp.vlinks[k], k});

    // LE/XOR per (virtual link, ordered physical pair)
    std::map<std::tuple<std::size_t, NodeId, NodeId>, int> le, xorv;
    for (std::size_t k = 0; k < vlinks.size(); ++k)
        for (const auto& [c, d] : pairs) {
            std::string suffix = std::to_string(k) + "_" + std::to_string(c) + "_" +
                                 std::to_string(d);
            le[{k, c, d}] = m.add_var("LE_" + suffix, VarKind::Binary);
            xorv[{k, c, d}] = m.add_var("XOR_" + suffix, VarKind::Binary);
        }

    std::map<DirectedLink, int> rtrfp;
    for (const auto& [c, d] : pairs)
        rtrfp[{c, d}] = m.add_var("RTRFP_" + std::to_string(c) + "_" + std::to_string(d),
                                  VarKind::NonNegContinuous);

    auto flow_family = [&](const char* base) {
        std::map<std::tuple<NodeId, NodeId, NodeId, NodeId>, int> flows, inds;
        for (const auto& [c, d] : pairs)
            for (const auto& [e, f] : dlinks) {
                std::string suffix = std::to_string(c) + "_" + std::to_string(d) + "_" +
                                     std::to_string(e) + "_" + std::to_string(f);
                flows[{c, d, e, f}] = m.add_var(std::string("R") + base + "_" + suffix,
                                                VarKind::NonNegContinuous);
                inds[{c, d, e, f}] = m.add_var(std::string("I") + base + "_" + suffix,
                                               VarKind::Binary);
            }
        return std::make_pair(flows, inds);
    };
    auto [r1, i1] = flow_family("1");
    decltype(r1) r2;
    decltype(i1) i2;
    if (dual) std::tie(r2, i2) = flow_family("2");

    std::map<DirectedLink, int> trfl1, trfl2;
    for (const auto& [e, f] : dlinks) {
        std::string suffix = std::to_string(e) + "_" + std::to_string(f);
        trfl1[{e, f}] = m.add_var("TRFL1_" + suffix, VarKind::NonNegContinuous);
        if (dual) trfl2[{e, f}] = m.add_var("TRFL2_" + suffix, VarKind::NonNegContinuous);
    }

    std::map<NodeId, int> trfn, wnode;
    std::map<std::pair<NodeId, std::size_t>, int> li;
    for (const auto& n : nodes) {
        trfn[n.id] = m.add_var("TRFN_" + std::to_string(n.id), VarKind::NonNegContinuous);
        wnode[n.id] = m.add_var("WNODE_" + std::to_string(n.id), VarKind::NonNegContinuous);
        for (std::size_t j = 0; j < table.levels.size(); ++j)
            li[{n.id, j}] = m.add_var(
                "LI_" + std::to_string(n.id) + "_" + std::to_string(j), VarKind::Binary);
    }

    // --- constraints -----------------------------------------------------
    int seq = 0;
    auto cname = [&seq](const std::string& tag) {
        return "c" + std::to_string(seq++) + "_t" + tag;
    };

    for (const auto& bp : request.bps)
        for (const auto& v : bp.vnodes) {
            LinearExpr ex;
            for (const auto& n : nodes) ex.add(1, ne.at({bp.id, v.id, n.id}));
            m.add_constraint(cname("5"), std::move(ex), Rel::EQ, 1, "5");
        }

    if (scheme.coexistence)
        for (const auto& bp : request.bps)
            for (const auto& n : nodes) {
                LinearExpr ex;
                for (const auto& v : bp.vnodes) ex.add(1, ne.at({bp.id, v.id, n.id}));
                m.add_constraint(cname("6"), std::move(ex), Rel::LE, 1, "6");
            }

    for (const auto& n : nodes) {
        LinearExpr lo, hi, mcu, ram;
        for (const auto& bp : request.bps)
            for (const auto& v : bp.vnodes) {
                int var = ne.at({bp.id, v.id, n.id});
                lo.add(1, var);
                hi.add(1, var);
                mcu.add(v.mcu_demand, var);
                ram.add(v.ram_demand, var);
            }
        lo.add(-1, ipm.at(n.id));
        m.add_constraint(cname("7"), std::move(lo), Rel::GE, 0, "7");
        hi.add(-M, ipm.at(n.id));
        m.add_constraint(cname("8"), std::move(hi), Rel::LE, 0, "8");
        m.add_constraint(cname("9"), std::move(mcu), Rel::LE, n.mcu_capacity, "9");
        m.add_constraint(cname("10"), std::move(ram), Rel::LE, n.ram_capacity, "10");
    }

    for (const auto& bp : request.bps)
        for (const auto& v : bp.vnodes)
            for (const auto& n : nodes) {
                {
                    LinearExpr ex;
                    ex.add(1, ne.at({bp.id, v.id, n.id}));
                    ex.add(-1, fvar.at({bp.id, v.id, n.id}));
                    m.add_constraint(cname("11"), std::move(ex), Rel::EQ, 0, "11");
                    LinearExpr cap;
                    cap.add(1, fvar.at({bp.id, v.id, n.id}));
                    double provides = n.functions.count(v.required_function) ? 1.0 : 0.0;
                    m.add_constraint(cname("12"), std::move(cap), Rel::LE, provides, "12");
                    if (provides == 0.0)
                        m.infeasibility_hints.push_back(
                            "node " + std::to_string(n.id) + " cannot host " + bp.id + "/" +
                            v.id + ": function '" + v.required_function + "' unsupported");
                }
                if (v.required_zone != kAnyZone) {
                    LinearExpr ex;
                    ex.add(1, ne.at({bp.id, v.id, n.id}));
                    ex.add(-1, zvar.at({bp.id, v.id, n.id}));
                    m.add_constraint(cname("13"), std::move(ex), Rel::EQ, 0, "13");
                    LinearExpr cap;
                    cap.add(1, zvar.at({bp.id, v.id, n.id}));
                    m.add_constraint(cname("14"), std::move(cap), Rel::LE,
                                     n.zone == v.required_zone ? 1.0 : 0.0, "14");
                }
            }

    for (std::size_t k = 0; k < vlinks.size(); ++k) {
        const auto& ref = vlinks[k];
        for (const auto& [c, d] : pairs) {
            LinearExpr ex;
            ex.add(1, ne.at({ref.bp->id, ref.vl->from, c}));
            ex.add(1, ne.at({ref.bp->id, ref.vl->to, d}));
            ex.add(-1, xorv.at({k, c, d}));
            ex.add(-2, le.at({k, c, d}));
            m.add_constraint(cname("15"), std::move(ex), Rel::EQ, 0, "15");
        }
    }

    for (const auto& [c, d] : pairs) {
        LinearExpr ex;
        for (std::size_t k = 0; k < vlinks.size(); ++k)
            ex.add(vlinks[k].vl->traffic_demand, le.at({k, c, d}));
        ex.add(-1, rtrfp.at({c, d}));
        m.add_constraint(cname("16"), std::move(ex), Rel::EQ, 0, "16");
    }

    // Flow conservation + indicators + no-split per path family. STR uses
    // 0.5-scaled supplies ((35)/(36)); other schemes full supply ((17)/(22)).
    auto path_constraints = [&](auto& flows, auto& inds, auto& trfl, const char* cons_tag,
                                const char* ind_lo_tag, const char* ind_hi_tag,
                                const char* nosplit_tag, const char* link_tag) {
        for (const auto& [c, d] : pairs) {
            for (const auto& n : nodes) {
                NodeId e = n.id;
                LinearExpr ex;
                for (NodeId f : net.neighbors(e)) {
                    ex.add(1, flows.at({c, d, e, f}));
                    ex.add(-1, flows.at({c, d, f, e}));
                }
                double sign = e == c ? 1.0 : (e == d ? -1.0 : 0.0);
                if (sign != 0.0) ex.add(-sign * supply, rtrfp.at({c, d}));
                m.add_constraint(cname(cons_tag), std::move(ex), Rel::EQ, 0, cons_tag);
            }
            for (const auto& [e, f] : dlinks) {
                LinearExpr lo;
                lo.add(1, flows.at({c, d, e, f}));
                lo.add(-1, inds.at({c, d, e, f}));
                m.add_constraint(cname(ind_lo_tag), std::move(lo), Rel::GE, 0, ind_lo_tag);
                LinearExpr hi;
                hi.add(1, flows.at({c, d, e, f}));
                hi.add(-M, inds.at({c, d, e, f}));
                m.add_constraint(cname(ind_hi_tag), std::move(hi), Rel::LE, 0, ind_hi_tag);
            }
            for (const auto& n : nodes) {
                LinearExpr ex;
                for (NodeId f : net.neighbors(n.id)) ex.add(1, inds.at({c, d, n.id, f}));
                if (!ex.terms.empty())
                    m.add_constraint(cname(nosplit_tag), std::move(ex), Rel::LE, 1,
                                     nosplit_tag);
            }
        }
        for (const auto& [e, f] : dlinks) {
            LinearExpr ex;
            for (const auto& [c, d] : pairs) ex.add(1, flows.at({c, d, e, f}));
            ex.add(-1, trfl.at({e, f}));
            m.add_constraint(cname(link_tag), std::move(ex), Rel::EQ, 0, link_tag);
        }
    };

    const bool str = scheme.traffic_mode == TrafficMode::STR;
    path_constraints(r1, i1, trfl1, str ? "35" : "17", "19", "20", "21", "18");
    if (dual) {
        path_constraints(r2, i2, trfl2, str ? "36" : "22", "24", "25", "26", "23");
        for (const auto& [c, d] : pairs)
            for (const auto& [e, f] : dlinks) {
                LinearExpr ex;
                ex.add(1, i1.at({c, d, e, f}));
                ex.add(1, i2.at({c, d, e, f}));
                m.add_constraint(cname("27"), std::move(ex), Rel::LE, 1, "27");
            }
    }

    // Network module activation, counting both orientations touching e.
    for (const auto& n : nodes) {
        LinearExpr lo, hi;
        for (const auto& [e, f] : dlinks) {
            if (e != n.id && f != n.id) continue;
            for (const auto& [c, d] : pairs) {
                lo.add(1, i1.at({c, d, e, f}));
                hi.add(1, r1.at({c, d, e, f}));
                if (dual) {
                    lo.add(1, i2.at({c, d, e, f}));
                    hi.add(1, r2.at({c, d, e, f}));
                }
            }
        }
        lo.add(-1, itm.at(n.id));
        m.add_constraint(cname("28"), std::move(lo), Rel::GE, 0, "28");
        hi.add(-M, itm.at(n.id));
        m.add_constraint(cname("29"), std::move(hi), Rel::LE, 0, "29");
    }

    for (const auto& n : nodes) {
        LinearExpr arrival;
        for (NodeId e : net.neighbors(n.id)) {
            arrival.add(1, trfl1.at({e, n.id}));
            if (dual) arrival.add(1, trfl2.at({e, n.id}));
        }
        arrival.add(-1, trfn.at(n.id));
        m.add_constraint(cname("30"), std::move(arrival), Rel::EQ, 0, "30");

        LinearExpr cap;
        cap.add(1, trfn.at(n.id));
        m.add_constraint(cname("31"), std::move(cap), Rel::LE, n.traffic_capacity, "31");

        LinearExpr sel, one, lat;
        for (std::size_t j = 0; j < table.levels.size(); ++j) {
            sel.add(table.levels[j].lambda_kbps, li.at({n.id, j}));
            one.add(1, li.at({n.id, j}));
            lat.add(table.levels[j].w_ms, li.at({n.id, j}));
        }
        sel.add(-1, trfn.at(n.id));
        m.add_constraint(cname("32"), std::move(sel), Rel::EQ, 0, "32");
        m.add_constraint(cname("33"), std::move(one), Rel::LE, 1, "33");
        lat.add(-1, wnode.at(n.id));
        m.add_constraint(cname("34"), std::move(lat), Rel::EQ, 0, "34");
    }

    // --- objective -------------------------------------------------------
    for (const auto& n : nodes) {
        m.objective.add(weights.alpha, wnode.at(n.id));
        m.objective.add(weights.beta * n.idle_cpu_power, ipm.at(n.id));
        m.objective.add(weights.gamma * n.idle_net_power, itm.at(n.id));
    }
    for (const auto& bp : request.bps)
        for (const auto& v : bp.vnodes)
            for (const auto& n : nodes)
                m.objective.add(
                    weights.beta * n.max_cpu_power * (v.mcu_demand / n.mcu_capacity),
                    ne.at({bp.id, v.id, n.id}));
    for (const auto& [ef, var] : trfl1)
        m.objective.add(weights.gamma * link_power_per_kbps(net.link(ef.first, ef.second)),
                        var);
    for (const auto& [ef, var] : trfl2)
        m.objective.add(weights.gamma * link_power_per_kbps(net.link(ef.first, ef.second)),
                        var);

    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// LP-format export

namespace detail {

inline void write_expr(std::ostream& os, const std::vector<MilpVar>& vars,
                       const LinearExpr& ex) {
    if (ex.terms.empty()) {
        os << " 0";
        return;
    }
    bool first = true;
    for (const auto& t : ex.terms) {
        double c = t.coeff;
        if (first) {
            if (c < 0) os << " - ";
            else os << " ";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        double mag = c < 0 ? -c : c;
        if (mag != 1.0) os << mag << " ";
        os << vars[static_cast<std::size_t>(t.var)].name;
    }
}

}  // namespace detail

/// Standard LP-format text (Minimize / Subject To / Bounds / Binaries).
/// Constraint provenance tags appear as comments. Deterministic output.
inline std::string emit_lp(const MilpInstance& m) {
    m.validate();
    std::ostringstream os;
    os.precision(17);
    os << "\\ generated by iotembed\n";
    os << "Minimize\n obj:";
    detail::write_expr(os, m.variables, m.objective);
    os << "\nSubject To\n";
    for (const auto& c : m.constraints) {
        os << "\\ source constraint (" << c.tag << ")\n";
        os << " " << c.name << ":";
        detail::write_expr(os, m.variables, c.lhs);
        switch (c.rel) {
            case Rel::LE: os << " <= "; break;
            case Rel::EQ: os << " = "; break;
            case Rel::GE: os << " >= "; break;
        }
        os << c.rhs << "\n";
    }
    os << "Bounds\n";
    for (const auto& v : m.variables)
        if (v.kind == VarKind::NonNegContinuous && v.upper)
            os << " 0 <= " << v.name << " <= " << *v.upper << "\n";
    os << "Binaries\n";
    for (const auto& v : m.variables)
        if (v.kind == VarKind::Binary) os << " " << v.name << "\n";
    os << "End\n";
    return os.str();
}

}  // namespace iotembed
