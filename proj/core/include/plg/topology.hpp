#pragma once

#include "plg/circuit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plg {

/// Flattened connectivity of a netlist. Every module socket is mapped onto a
/// net (an equivalence class under internal merges and tubes); the reserved
/// exhaust is a single shared net. Unknown tube endpoints are ignored here;
/// `validate` reports them.
class NetGraph {
public:
    struct Valve {
        int module = 0;
        ValveKind kind = ValveKind::NormallyOpen;
        int in = -1;
        int out = -1;
        int control = -1;
    };

    explicit NetGraph(const Netlist& netlist);

    [[nodiscard]] int net_count() const noexcept { return static_cast<int>(names_.size()); }
    [[nodiscard]] int exhaust_net() const noexcept { return exhaust_; }

    /// -1 when the module or socket is unknown.
    [[nodiscard]] int net_of(const NodeRef& ref) const;
    [[nodiscard]] int net_of(int module, SocketId socket) const;

    [[nodiscard]] const std::string& name(int net) const { return names_.at(net); }

    /// Largest supply pressure feeding the net, if any.
    [[nodiscard]] std::optional<double> supply_pressure(int net) const { return supply_.at(net); }

    /// Net of the module's OUT channel.
    [[nodiscard]] int output_net(int module) const { return output_net_.at(module); }
    /// Nets of the module's logic inputs, aligned with input_sockets(gate).
    [[nodiscard]] const std::vector<int>& input_nets(int module) const { return input_nets_.at(module); }

    /// Index of the module whose output drives `net`, or -1. With several
    /// drivers the first in module order wins.
    [[nodiscard]] int driver_of(int net) const { return driver_.at(net); }

    [[nodiscard]] const std::vector<Valve>& valves() const noexcept { return valves_; }
    [[nodiscard]] int module_count() const noexcept { return static_cast<int>(module_ids_.size()); }
    [[nodiscard]] const std::string& module_id(int module) const { return module_ids_.at(module); }
    [[nodiscard]] int module_index(std::string_view id) const;

    /// Adjacency of the trigger graph: successors[m] lists the modules whose
    /// logic inputs sit on m's output net, ascending.
    [[nodiscard]] std::vector<std::vector<int>> trigger_successors() const;

    /// Tubes incident to the net.
    [[nodiscard]] const std::vector<int>& tubes_on(int net) const { return tubes_on_.at(net); }

private:
    std::vector<std::string> module_ids_;
    std::vector<std::vector<int>> socket_net_;  // [module][socket] -> net
    std::vector<std::string> names_;
    std::vector<std::optional<double>> supply_;
    std::vector<int> output_net_;
    std::vector<std::vector<int>> input_nets_;
    std::vector<int> driver_;
    std::vector<Valve> valves_;
    std::vector<std::vector<int>> tubes_on_;
    int exhaust_ = -1;
};

}  // namespace plg
