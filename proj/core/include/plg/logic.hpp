#pragma once

// Digital view of PLG circuits: path-semantics gate evaluation, truth tables,
// steady-state evaluation of acyclic circuits, feedback-loop discovery and an
// event-driven delay simulator.

#include "plg/circuit.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace plg {

/// Evaluate one gate. `inputs` holds a level per entry of
/// input_sockets(gate), in that order. `supplied` says whether the
/// supply-class channel carries pressure.
///
/// OUT is HIGH iff an open-valve path joins it to a HIGH source and none to
/// a LOW one (exhaust or a LOW input); LOW in the mirror case; otherwise
/// INDETERMINATE (contention or floating). Valve controls that are neither
/// driven nor pressurized read as LOW.
LogicLevel evaluate_gate(const GateKind& gate, const std::vector<LogicLevel>& inputs, bool supplied = true);

struct TruthTable {
    std::vector<SocketId> inputs;
    /// One row per input combination, LOW before HIGH, first input most
    /// significant.
    std::vector<std::pair<std::vector<LogicLevel>, LogicLevel>> rows;

    [[nodiscard]] LogicLevel lookup(const std::vector<LogicLevel>& in) const;
    /// Fixed-width text rendering, e.g. "T  OUT\nL  H\nH  L\n".
    [[nodiscard]] std::string format() const;
};

/// Throws IncompleteWiring for an underspecified generic gate.
TruthTable truth_table(const GateKind& gate);

/// Levels for every exposed socket of every module. Undriven inputs read as
/// LOW unless overridden by `inputs`. Throws CombinationalLoop when the
/// trigger graph has a cycle and InvalidNetlist on structural errors other
/// than undriven triggers.
std::map<NodeRef, LogicLevel> eval_combinational(const Netlist& netlist,
                                                 const std::map<NodeRef, LogicLevel>& inputs = {});

/// Elementary cycles of the trigger graph as module-id sequences. Each cycle
/// starts at its smallest id; cycles are sorted.
std::vector<std::vector<std::string>> find_feedback_loops(const Netlist& netlist);

struct StageDelay {
    double rise = 0.7475;  // s
    double fall = 0.7475;  // s

    bool operator==(const StageDelay&) const = default;
};

struct DelayModel {
    StageDelay uniform;
    std::map<std::string, StageDelay> per_module;

    [[nodiscard]] StageDelay for_module(const std::string& id) const;
    [[nodiscard]] DelayModel scaled(double k) const;
};

/// Piecewise-constant levels. levels[node][row] holds the level from
/// times[row] until the next row.
struct LogicTrace {
    std::vector<std::string> nodes;
    std::vector<double> times;
    std::vector<std::vector<LogicLevel>> levels;

    [[nodiscard]] int index_of(const std::string& node) const;
    [[nodiscard]] LogicLevel at(const std::string& node, double t) const;
    /// Times at which the node switches to HIGH.
    [[nodiscard]] std::vector<double> rising_edges(const std::string& node) const;
};

/// Scheduling quantum of simulate_logic.
inline constexpr double kLogicTimeQuantum = 1e-6;

/// Event-driven run from the all-LOW state with supplies present at t = 0.
/// Module outputs follow their gate function after the rise/fall delay
/// (inertial: a reverted input cancels a pending change). Nodes are the
/// module ids. Throws InvalidNetlist or InvalidArgument.
LogicTrace simulate_logic(const Netlist& netlist, const DelayModel& delays, double duration);

/// Mean spacing of rising edges after `settle` seconds. Throws
/// NotOscillating with fewer than three such edges.
double measure_period(const LogicTrace& trace, const std::string& node, double settle = 0.0);

/// Module ids in order of their first rising edge after `settle`.
std::vector<std::string> edge_order(const LogicTrace& trace, double settle = 0.0);

/// edge_order rotated to start at the smallest id, for comparing cyclic
/// sequences.
std::vector<std::string> cyclic_edge_order(const LogicTrace& trace, double settle = 0.0);

}  // namespace plg
