#include "plg/logic.hpp"

#include "plg/error.hpp"
#include "plg/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>

namespace plg {

namespace {

enum class Chan : std::uint8_t { Low, High, Conflict, Floating };

// Path semantics on the gate's eight local channels with definite inputs.
LogicLevel evaluate_definite(const GateWiring& wiring, const std::vector<SocketId>& input_reps,
                             const std::vector<LogicLevel>& inputs, bool supplied) {
    constexpr int kChans = 8;
    std::array<int, kChans> rep{};
    for (SocketId s : kAllSockets) rep[static_cast<int>(s)] = static_cast<int>(local_node(wiring, s));

    // Source channels have fixed levels; everything else is derived.
    std::array<std::optional<LogicLevel>, kChans> source{};
    for (SocketId s : kAllSockets) {
        const int r = rep[static_cast<int>(s)];
        if (s == SocketId::Exhaust) source[r] = LogicLevel::Low;
        if (is_supply_socket(s) && supplied && !source[r]) source[r] = LogicLevel::High;
    }
    for (std::size_t i = 0; i < input_reps.size(); ++i) {
        source[static_cast<int>(input_reps[i])] = inputs[i];
    }

    std::array<Chan, kChans> level{};
    level.fill(Chan::Floating);
    const int out = rep[static_cast<int>(SocketId::Out)];

    for (int iter = 0; iter < 16; ++iter) {
        auto high_at = [&](int ch) -> std::optional<bool> {
            if (source[ch]) return *source[ch] == LogicLevel::High;
            if (level[ch] == Chan::Conflict) return std::nullopt;
            return level[ch] == Chan::High;  // floating reads as unpressurized
        };
        std::vector<std::pair<int, int>> edges;
        for (const auto& v : wiring.valves) {
            if (!v.tube_in || !v.tube_out || !v.control) continue;
            const auto ctrl = high_at(rep[static_cast<int>(*v.control)]);
            if (!ctrl) return LogicLevel::Indeterminate;
            if (v.conducts(*ctrl)) {
                edges.emplace_back(rep[static_cast<int>(*v.tube_in)], rep[static_cast<int>(*v.tube_out)]);
            }
        }
        auto reach = [&](LogicLevel from) {
            std::array<bool, kChans> seen{};
            std::vector<int> stack;
            for (int c = 0; c < kChans; ++c) {
                if (source[c] && *source[c] == from) {
                    seen[c] = true;
                    stack.push_back(c);
                }
            }
            while (!stack.empty()) {
                const int c = stack.back();
                stack.pop_back();
                // Sources terminate paths: a LOW input does not relay supply.
                if (source[c] && *source[c] != from) continue;
                for (const auto& [a, b] : edges) {
                    const int nxt = a == c ? b : (b == c ? a : -1);
                    if (nxt >= 0 && !seen[nxt]) {
                        seen[nxt] = true;
                        stack.push_back(nxt);
                    }
                }
            }
            return seen;
        };
        const auto hi = reach(LogicLevel::High);
        const auto lo = reach(LogicLevel::Low);
        std::array<Chan, kChans> next{};
        for (int c = 0; c < kChans; ++c) {
            if (hi[c] && lo[c]) {
                next[c] = Chan::Conflict;
            } else if (hi[c]) {
                next[c] = Chan::High;
            } else if (lo[c]) {
                next[c] = Chan::Low;
            } else {
                next[c] = Chan::Floating;
            }
        }
        if (next == level) {
            if (source[out]) return *source[out];
            switch (level[out]) {
            case Chan::High: return LogicLevel::High;
            case Chan::Low: return LogicLevel::Low;
            default: return LogicLevel::Indeterminate;
            }
        }
        level = next;
    }
    return LogicLevel::Indeterminate;  // internal feedback never settled
}

}  // namespace

LogicLevel evaluate_gate(const GateKind& gate, const std::vector<LogicLevel>& inputs, bool supplied) {
    const GateWiring wiring = resolved_wiring(gate);
    const auto reps = input_sockets(gate);
    if (inputs.size() != reps.size()) {
        throw InvalidArgument("gate expects " + std::to_string(reps.size()) + " inputs, got " +
                              std::to_string(inputs.size()));
    }
    // An indeterminate input is resolved both ways; disagreement stays X.
    std::vector<std::size_t> unknown;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i] == LogicLevel::Indeterminate) unknown.push_back(i);
    }
    if (unknown.empty()) return evaluate_definite(wiring, reps, inputs, supplied);
    std::optional<LogicLevel> agreed;
    std::vector<LogicLevel> probe = inputs;
    for (std::size_t mask = 0; mask < (std::size_t{1} << unknown.size()); ++mask) {
        for (std::size_t k = 0; k < unknown.size(); ++k) {
            probe[unknown[k]] = ((mask >> k) & 1U) != 0 ? LogicLevel::High : LogicLevel::Low;
        }
        const LogicLevel r = evaluate_definite(wiring, reps, probe, supplied);
        if (agreed && *agreed != r) return LogicLevel::Indeterminate;
        agreed = r;
    }
    return *agreed;
}

LogicLevel TruthTable::lookup(const std::vector<LogicLevel>& in) const {
    for (const auto& [row_in, out] : rows) {
        if (row_in == in) return out;
    }
    throw InvalidArgument("no truth-table row for the given inputs");
}

std::string TruthTable::format() const {
    auto letter = [](LogicLevel l) {
        switch (l) {
        case LogicLevel::Low: return 'L';
        case LogicLevel::High: return 'H';
        default: return 'X';
        }
    };
    std::vector<std::string> header;
    for (SocketId s : inputs) header.emplace_back(to_string(s));
    header.emplace_back("OUT");
    std::vector<std::size_t> width;
    for (const auto& h : header) width.push_back(std::max<std::size_t>(h.size(), 1));

    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            os << cells[i];
            if (i + 1 < cells.size()) os << std::string(width[i] - cells[i].size() + 2, ' ');
        }
        os << '\n';
    };
    emit(header);
    for (const auto& [in, out] : rows) {
        std::vector<std::string> cells;
        for (LogicLevel l : in) cells.emplace_back(1, letter(l));
        cells.emplace_back(1, letter(out));
        emit(cells);
    }
    return os.str();
}

TruthTable truth_table(const GateKind& gate) {
    if (gate.type == GateType::Generic) check_wiring_complete(gate.wiring);
    TruthTable table;
    table.inputs = input_sockets(gate);
    const std::size_t k = table.inputs.size();
    for (std::size_t code = 0; code < (std::size_t{1} << k); ++code) {
        std::vector<LogicLevel> in(k);
        for (std::size_t i = 0; i < k; ++i) {
            in[i] = ((code >> (k - 1 - i)) & 1U) != 0 ? LogicLevel::High : LogicLevel::Low;
        }
        table.rows.emplace_back(in, evaluate_gate(gate, in));
    }
    return table;
}

namespace {

// Modules sorted by natural id order; index into netlist.modules.
std::vector<int> id_order(const Netlist& netlist) {
    std::vector<int> order(netlist.modules.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return natural_less(netlist.modules[a].id, netlist.modules[b].id);
    });
    return order;
}

void require_valid(const Netlist& netlist, bool allow_dangling) {
    const auto report = validate(netlist);
    for (const auto& e : report.errors) {
        if (allow_dangling && e.code == "DANGLING_TRIGGER") continue;
        throw InvalidNetlist(e.code + " at " + e.location + ": " + e.message);
    }
}

}  // namespace

std::map<NodeRef, LogicLevel> eval_combinational(const Netlist& netlist,
                                                 const std::map<NodeRef, LogicLevel>& inputs) {
    require_valid(netlist, true);
    const NetGraph graph(netlist);
    const auto loops = find_feedback_loops(netlist);
    if (!loops.empty()) {
        std::string cycle;
        for (const auto& id : loops.front()) cycle += (cycle.empty() ? "" : " -> ") + id;
        throw CombinationalLoop("feedback cycle " + cycle + "; use simulate_logic");
    }

    std::vector<std::optional<LogicLevel>> forced(static_cast<std::size_t>(graph.net_count()));
    for (const auto& [ref, level] : inputs) {
        const int net = graph.net_of(ref);
        if (net < 0) throw InvalidArgument("input refers to unknown node " + ref.str());
        forced[net] = level;
    }

    const int n = graph.module_count();
    std::vector<std::optional<LogicLevel>> out(static_cast<std::size_t>(n));
    std::function<LogicLevel(int)> net_level;
    std::function<LogicLevel(int)> module_output = [&](int m) -> LogicLevel {
        if (out[m]) return *out[m];
        std::vector<LogicLevel> in;
        for (int net : graph.input_nets(m)) in.push_back(net_level(net));
        const bool supplied = graph.supply_pressure(graph.net_of(m, SocketId::SpIn)).has_value();
        out[m] = evaluate_gate(netlist.modules[m].gate, in, supplied);
        return *out[m];
    };
    net_level = [&](int net) -> LogicLevel {
        if (forced[net]) return *forced[net];
        if (graph.supply_pressure(net)) return LogicLevel::High;
        if (net == graph.exhaust_net()) return LogicLevel::Low;
        const int driver = graph.driver_of(net);
        if (driver >= 0) return module_output(driver);
        return LogicLevel::Low;
    };

    std::map<NodeRef, LogicLevel> result;
    for (int m = 0; m < n; ++m) {
        for (SocketId s : exposed_sockets(netlist.modules[m].gate)) {
            result[{netlist.modules[m].id, s}] = net_level(graph.net_of(m, s));
        }
    }
    return result;
}

std::vector<std::vector<std::string>> find_feedback_loops(const Netlist& netlist) {
    const NetGraph graph(netlist);
    const auto succ = graph.trigger_successors();
    const auto order = id_order(netlist);
    std::vector<int> rank(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<bool> on_path(order.size(), false);
    // Cycles are enumerated once each, rooted at their lowest-ranked module.
    std::function<void(int, int)> dfs = [&](int root, int v) {
        for (int w : succ[v]) {
            if (w == root) {
                cycles.push_back(path);
            } else if (rank[w] > rank[root] && !on_path[w]) {
                on_path[w] = true;
                path.push_back(w);
                dfs(root, w);
                path.pop_back();
                on_path[w] = false;
            }
        }
    };
    for (int root : order) {
        path = {root};
        on_path[root] = true;
        dfs(root, root);
        on_path[root] = false;
    }

    std::sort(cycles.begin(), cycles.end(), [&](const std::vector<int>& a, const std::vector<int>& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [&](int x, int y) { return rank[x] < rank[y]; });
    });
    std::vector<std::vector<std::string>> out;
    for (const auto& c : cycles) {
        std::vector<std::string> ids;
        for (int m : c) ids.push_back(netlist.modules[m].id);
        out.push_back(std::move(ids));
    }
    return out;
}

StageDelay DelayModel::for_module(const std::string& id) const {
    const auto it = per_module.find(id);
    return it == per_module.end() ? uniform : it->second;
}

DelayModel DelayModel::scaled(double k) const {
    DelayModel d = *this;
    d.uniform.rise *= k;
    d.uniform.fall *= k;
    for (auto& [id, s] : d.per_module) {
        s.rise *= k;
        s.fall *= k;
    }
    return d;
}

int LogicTrace::index_of(const std::string& node) const {
    const auto it = std::find(nodes.begin(), nodes.end(), node);
    return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

LogicLevel LogicTrace::at(const std::string& node, double t) const {
    const int i = index_of(node);
    if (i < 0) throw InvalidArgument("trace has no node " + node);
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return levels[i].front();
    return levels[i][static_cast<std::size_t>(it - times.begin()) - 1];
}

std::vector<double> LogicTrace::rising_edges(const std::string& node) const {
    const int i = index_of(node);
    if (i < 0) throw InvalidArgument("trace has no node " + node);
    std::vector<double> edges;
    for (std::size_t r = 1; r < times.size(); ++r) {
        if (levels[i][r] == LogicLevel::High && levels[i][r - 1] != LogicLevel::High) edges.push_back(times[r]);
    }
    return edges;
}

LogicTrace simulate_logic(const Netlist& netlist, const DelayModel& delays, double duration) {
    if (!(duration > 0.0)) throw InvalidArgument("duration must be positive");
    require_valid(netlist, false);
    const NetGraph graph(netlist);
    const auto order = id_order(netlist);
    const int n = graph.module_count();

    using Tick = std::int64_t;
    auto ticks = [](double s) { return static_cast<Tick>(std::llround(s / kLogicTimeQuantum)); };
    std::vector<Tick> rise(static_cast<std::size_t>(n));
    std::vector<Tick> fall(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const StageDelay d = delays.for_module(netlist.modules[m].id);
        if (!(d.rise > 0.0) || !(d.fall > 0.0)) throw InvalidArgument("stage delays must be positive");
        rise[m] = std::max<Tick>(1, ticks(d.rise));
        fall[m] = std::max<Tick>(1, ticks(d.fall));
    }
    const Tick end = ticks(duration);

    std::vector<LogicLevel> output(static_cast<std::size_t>(n), LogicLevel::Low);
    struct Pending {
        bool active = false;
        LogicLevel target = LogicLevel::Low;
        std::uint64_t generation = 0;
    };
    std::vector<Pending> pending(static_cast<std::size_t>(n));
    std::vector<int> rank(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rank[order[i]] = i;

    // (tick, rank, generation, module): ties resolve in ascending id order.
    using Event = std::tuple<Tick, int, std::uint64_t, int>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;

    auto net_level = [&](int net) {
        if (graph.supply_pressure(net)) return LogicLevel::High;
        if (net == graph.exhaust_net()) return LogicLevel::Low;
        const int driver = graph.driver_of(net);
        return driver >= 0 ? output[driver] : LogicLevel::Low;
    };
    auto reevaluate = [&](int m, Tick now) {
        std::vector<LogicLevel> in;
        for (int net : graph.input_nets(m)) in.push_back(net_level(net));
        const bool supplied = graph.supply_pressure(graph.net_of(m, SocketId::SpIn)).has_value();
        const LogicLevel target = evaluate_gate(netlist.modules[m].gate, in, supplied);
        Pending& p = pending[m];
        if (target == output[m]) {
            if (p.active) {
                p.active = false;
                ++p.generation;
            }
            return;
        }
        if (p.active && p.target == target) return;
        p.active = true;
        p.target = target;
        ++p.generation;
        const Tick delay = target == LogicLevel::High  ? rise[m]
                           : target == LogicLevel::Low ? fall[m]
                                                       : std::max(rise[m], fall[m]);
        queue.emplace(now + delay, rank[m], p.generation, m);
    };

    LogicTrace trace;
    for (int m : order) trace.nodes.push_back(netlist.modules[m].id);
    trace.levels.resize(static_cast<std::size_t>(n));
    auto record = [&](Tick t) {
        trace.times.push_back(static_cast<double>(t) * kLogicTimeQuantum);
        for (int i = 0; i < n; ++i) trace.levels[i].push_back(output[order[i]]);
    };

    for (int m : order) reevaluate(m, 0);
    record(0);

    while (!queue.empty()) {
        const Tick now = std::get<0>(queue.top());
        if (now > end) break;
        bool changed = false;
        while (!queue.empty() && std::get<0>(queue.top()) == now) {
            const auto [t, r, gen, m] = queue.top();
            queue.pop();
            Pending& p = pending[m];
            if (!p.active || p.generation != gen) continue;
            p.active = false;
            if (output[m] != p.target) {
                output[m] = p.target;
                changed = true;
            }
        }
        if (!changed) continue;
        for (int m : order) reevaluate(m, now);
        record(now);
    }
    return trace;
}

double measure_period(const LogicTrace& trace, const std::string& node, double settle) {
    std::vector<double> edges = trace.rising_edges(node);
    edges.erase(std::remove_if(edges.begin(), edges.end(), [&](double t) { return t < settle; }), edges.end());
    if (edges.size() < 3) {
        throw NotOscillating("node " + node + " has " + std::to_string(edges.size()) +
                             " rising edges after settling; need 3");
    }
    return (edges.back() - edges.front()) / static_cast<double>(edges.size() - 1);
}

std::vector<std::string> edge_order(const LogicTrace& trace, double settle) {
    std::vector<std::pair<double, std::string>> first;
    for (const auto& node : trace.nodes) {
        for (double t : trace.rising_edges(node)) {
            if (t >= settle) {
                first.emplace_back(t, node);
                break;
            }
        }
    }
    std::stable_sort(first.begin(), first.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> ids;
    for (auto& [t, id] : first) ids.push_back(std::move(id));
    return ids;
}

std::vector<std::string> cyclic_edge_order(const LogicTrace& trace, double settle) {
    auto ids = edge_order(trace, settle);
    if (ids.empty()) return ids;
    const auto lowest = std::min_element(ids.begin(), ids.end(),
                                         [](const auto& a, const auto& b) { return natural_less(a, b); });
    std::rotate(ids.begin(), lowest, ids.end());
    return ids;
}

}  // namespace plg
