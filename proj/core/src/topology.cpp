#include "plg/topology.hpp"

#include <algorithm>
#include <numeric>

namespace plg {

namespace {

constexpr int kSockets = 8;

class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    // Keeps the smaller root so net numbering follows declaration order.
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<int> parent_;
};

}  // namespace

NetGraph::NetGraph(const Netlist& netlist) {
    const int n_modules = static_cast<int>(netlist.modules.size());
    for (const auto& m : netlist.modules) module_ids_.push_back(m.id);

    // Slot 0 is the shared exhaust; module m socket s lives at 1 + m*8 + s.
    const int n_slots = 1 + n_modules * kSockets;
    auto slot = [](int module, SocketId s) { return 1 + module * kSockets + static_cast<int>(s); };
    DisjointSets sets(n_slots);

    std::vector<GateWiring> wirings;
    wirings.reserve(netlist.modules.size());
    for (int m = 0; m < n_modules; ++m) {
        wirings.push_back(resolved_wiring(netlist.modules[m].gate));
        for (const auto& [a, b] : wirings.back().merges) sets.unite(slot(m, a), slot(m, b));
        sets.unite(0, slot(m, SocketId::Exhaust));
    }

    auto resolve = [&](const NodeRef& ref) -> int {
        const int m = module_index(ref.module);
        if (m < 0 || ref.socket == SocketId::Exhaust) return -1;
        if (!is_exposed(netlist.modules[m].gate, ref.socket)) return -1;
        return slot(m, ref.socket);
    };
    for (const auto& t : netlist.tubes) {
        const int a = resolve(t.from);
        const int b = resolve(t.to);
        if (a >= 0 && b >= 0) sets.unite(a, b);
    }

    // Number nets by first appearance so ids are stable for equal netlists.
    std::vector<int> root_to_net(static_cast<std::size_t>(n_slots), -1);
    std::vector<std::vector<NodeRef>> members;
    auto net_for_slot = [&](int s) {
        const int r = sets.find(s);
        if (root_to_net[r] < 0) {
            root_to_net[r] = static_cast<int>(members.size());
            members.emplace_back();
        }
        return root_to_net[r];
    };
    exhaust_ = net_for_slot(0);
    socket_net_.assign(static_cast<std::size_t>(n_modules), std::vector<int>(kSockets, -1));
    for (int m = 0; m < n_modules; ++m) {
        for (SocketId s : kAllSockets) {
            const int net = net_for_slot(slot(m, s));
            socket_net_[m][static_cast<int>(s)] = net;
            if (s != SocketId::Exhaust) members[net].push_back({module_ids_[m], s});
        }
    }

    names_.resize(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (static_cast<int>(i) == exhaust_) {
            names_[i] = "EXHAUST";
            continue;
        }
        auto it = std::min_element(members[i].begin(), members[i].end());
        names_[i] = it == members[i].end() ? "net" + std::to_string(i) : it->str();
    }

    supply_.assign(members.size(), std::nullopt);
    for (const auto& s : netlist.supplies) {
        const int sl = resolve(s.node);
        if (sl < 0) continue;
        const int net = root_to_net[sets.find(sl)];
        if (!supply_[net] || *supply_[net] < s.pressure) supply_[net] = s.pressure;
    }

    driver_.assign(members.size(), -1);
    output_net_.resize(static_cast<std::size_t>(n_modules));
    input_nets_.resize(static_cast<std::size_t>(n_modules));
    for (int m = 0; m < n_modules; ++m) {
        const auto& gate = netlist.modules[m].gate;
        output_net_[m] = socket_net_[m][static_cast<int>(SocketId::Out)];
        if (driver_[output_net_[m]] < 0) driver_[output_net_[m]] = m;
        for (SocketId s : input_sockets(gate)) input_nets_[m].push_back(socket_net_[m][static_cast<int>(s)]);
        for (const auto& v : wirings[m].valves) {
            if (!v.tube_in || !v.tube_out || !v.control) continue;
            valves_.push_back({m, v.kind, socket_net_[m][static_cast<int>(*v.tube_in)],
                               socket_net_[m][static_cast<int>(*v.tube_out)],
                               socket_net_[m][static_cast<int>(*v.control)]});
        }
    }

    tubes_on_.assign(members.size(), {});
    for (std::size_t i = 0; i < netlist.tubes.size(); ++i) {
        const int sl = resolve(netlist.tubes[i].from);
        if (sl < 0 || resolve(netlist.tubes[i].to) < 0) continue;
        tubes_on_[root_to_net[sets.find(sl)]].push_back(static_cast<int>(i));
    }
}

int NetGraph::module_index(std::string_view id) const {
    for (std::size_t i = 0; i < module_ids_.size(); ++i) {
        if (module_ids_[i] == id) return static_cast<int>(i);
    }
    return -1;
}

int NetGraph::net_of(int module, SocketId socket) const {
    if (module < 0 || module >= module_count()) return -1;
    return socket_net_[module][static_cast<int>(socket)];
}

int NetGraph::net_of(const NodeRef& ref) const { return net_of(module_index(ref.module), ref.socket); }

std::vector<std::vector<int>> NetGraph::trigger_successors() const {
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(module_count()));
    for (int a = 0; a < module_count(); ++a) {
        for (int b = 0; b < module_count(); ++b) {
            const auto& in = input_nets_[b];
            if (std::find(in.begin(), in.end(), output_net_[a]) != in.end()) succ[a].push_back(b);
        }
    }
    return succ;
}

}  // namespace plg
