#include "plg/circuit.hpp"
#include "plg/error.hpp"
#include "plg/topology.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace plg {

namespace {

struct Checker {
    const Netlist& netlist;
    ValidationReport report;

    void error(std::string code, std::string message, std::string location) {
        report.errors.push_back({std::move(code), std::move(message), std::move(location)});
    }
    void warn(std::string code, std::string message, std::string location) {
        report.warnings.push_back({std::move(code), std::move(message), std::move(location)});
    }

    // True when the reference resolves to an exposed socket.
    bool check_ref(const NodeRef& ref, const std::string& where) {
        const ModuleSpec* m = netlist.find_module(ref.module);
        if (m == nullptr) {
            error("UNKNOWN_MODULE", "reference to undeclared module '" + ref.module + "'", where);
            return false;
        }
        if (!is_exposed(m->gate, ref.socket)) {
            error("UNKNOWN_SOCKET",
                  std::string(to_string(m->gate.type)) + " module has no socket " +
                      std::string(to_string(ref.socket)),
                  where);
            return false;
        }
        return true;
    }
};

bool uses_supply(const GateKind& gate) {
    if (gate.type != GateType::Generic) return true;
    for (const auto& v : gate.wiring.valves) {
        for (const auto& s : {v.tube_in, v.tube_out, v.control}) {
            if (s && is_supply_socket(*s)) return true;
        }
    }
    return false;
}

}  // namespace

ValidationReport validate(const Netlist& netlist) {
    Checker c{netlist, {}};

    std::set<std::string> seen;
    for (const auto& m : netlist.modules) {
        if (m.id.empty()) c.error("EMPTY_ID", "module without id", "");
        if (!seen.insert(m.id).second) c.error("DUPLICATE_ID", "module id '" + m.id + "' declared twice", m.id);
        if (m.output_ratio && !(*m.output_ratio > 0.0 && *m.output_ratio <= 1.0)) {
            c.error("BAD_OUTPUT_RATIO", "output ratio must lie in (0, 1]", m.id);
        }
        if (m.bellow) {
            try {
                m.bellow->check();
            } catch (const Error& e) {
                c.error("BAD_BELLOW", e.what(), m.id);
            }
        }
        if (m.gate.type == GateType::Generic) {
            try {
                check_wiring_complete(m.gate.wiring);
            } catch (const Error& e) {
                c.error("INCOMPLETE_WIRING", e.what(), m.id);
            }
        }
    }

    std::set<NodeRef> tubed;
    for (std::size_t i = 0; i < netlist.tubes.size(); ++i) {
        const auto& t = netlist.tubes[i];
        const std::string where = t.from.str() + " -> " + t.to.str();
        c.check_ref(t.from, where);
        c.check_ref(t.to, where);
        if (!(t.length > 0.0) || !(t.inner_diameter > 0.0)) {
            c.error("BAD_TUBE", "tube length and inner diameter must be positive", where);
        }
        if (t.from == t.to) c.error("BAD_TUBE", "tube connects a socket to itself", where);
        tubed.insert(t.from);
        tubed.insert(t.to);
    }

    const NetGraph graph(netlist);

    std::map<int, std::vector<const SupplySpec*>> supplies_by_net;
    for (const auto& s : netlist.supplies) {
        const std::string where = s.node.str();
        if (!c.check_ref(s.node, where)) continue;
        if (!(s.pressure > 0.0)) c.error("BAD_SUPPLY", "supply pressure must be positive", where);
        supplies_by_net[graph.net_of(s.node)].push_back(&s);
    }
    for (const auto& [net, list] : supplies_by_net) {
        for (std::size_t i = 1; i < list.size(); ++i) {
            if (list[i]->pressure != list[0]->pressure) {
                c.error("SUPPLY_CONFLICT",
                        "supplies at " + std::to_string(list[0]->pressure) + " and " +
                            std::to_string(list[i]->pressure) + " bar drive the same node",
                        graph.name(net));
            } else {
                c.warn("DUPLICATE_SUPPLY", "node supplied twice at the same pressure", graph.name(net));
            }
        }
    }

    std::set<NodeRef> stoppered;
    for (const auto& s : netlist.stoppers) {
        if (!c.check_ref(s, s.str())) continue;
        stoppered.insert(s);
        if (tubed.count(s) != 0) {
            c.error("STOPPER_CONNECTED", "stoppered socket is also connected by a tube", s.str());
        }
    }

    for (int m = 0; m < graph.module_count(); ++m) {
        const ModuleSpec& spec = netlist.modules[m];
        if (uses_supply(spec.gate) && !graph.supply_pressure(graph.net_of(m, SocketId::SpIn))) {
            c.error("UNSUPPLIED_GATE", "supply inlet has no pressure source", spec.id + ".SP_IN");
        }
        const auto inputs = input_sockets(spec.gate);
        const auto& nets = graph.input_nets(m);
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const int net = nets[i];
            if (graph.driver_of(net) < 0 && !graph.supply_pressure(net)) {
                c.error("DANGLING_TRIGGER", "input is not driven by any output or supply",
                        spec.id + "." + std::string(to_string(inputs[i])));
            }
        }
        if (spec.gate.type != GateType::Generic) {
            const NodeRef thru{spec.id, SocketId::SpThru};
            if (graph.supply_pressure(graph.net_of(m, SocketId::SpThru)) && tubed.count(thru) == 0 &&
                stoppered.count(thru) == 0) {
                c.warn("OPEN_SUPPLY_PORT", "supply pass-through is neither connected nor stoppered",
                       thru.str());
            }
        }
    }
    return c.report;
}

}  // namespace plg
