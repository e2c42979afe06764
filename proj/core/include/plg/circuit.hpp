#pragma once

// Domain model for pneumatic logic gate (PLG) circuits: sockets, valves,
// gate kinds, modules, tubes and the netlist that ties them together.

#include "plg/bellow.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plg {

enum class LogicLevel : std::uint8_t { Low, High, Indeterminate };

/// '0', '1' or 'X'.
char to_char(LogicLevel level) noexcept;
LogicLevel logic_not(LogicLevel level) noexcept;

/// Pneumatic ports of a PLG module.
///   SpIn/SpThru  supply T-connection (inlet and pass-through to the next module)
///   T            trigger inlet
///   Out/OutNext  split output (bellow channel and the channel along the trigger axis)
///   C1/C2        valve control inlets (merged into the supply on modified gates)
///   Exhaust      reserved vent node at 0 bar gauge; never connectable
enum class SocketId : std::uint8_t { SpIn, SpThru, T, Out, OutNext, C1, C2, Exhaust };

inline constexpr SocketId kAllSockets[] = {SocketId::SpIn, SocketId::SpThru, SocketId::T,
                                           SocketId::Out,  SocketId::OutNext, SocketId::C1,
                                           SocketId::C2,   SocketId::Exhaust};

std::string_view to_string(SocketId socket) noexcept;
std::optional<SocketId> parse_socket(std::string_view text) noexcept;

enum class ValveKind : std::uint8_t { NormallyOpen, NormallyClosed };

std::string_view to_string(ValveKind kind) noexcept;

/// One pinch valve inside a gate. Endpoints are local sockets of the module;
/// an unset field means the wiring is underspecified.
struct ValveSpec {
    ValveKind kind = ValveKind::NormallyOpen;
    std::optional<SocketId> tube_in;
    std::optional<SocketId> tube_out;
    std::optional<SocketId> control;

    /// NO conducts while control is LOW; NC conducts while control is HIGH.
    [[nodiscard]] bool conducts(bool control_high) const noexcept {
        return kind == ValveKind::NormallyOpen ? !control_high : control_high;
    }

    bool operator==(const ValveSpec&) const = default;
};

/// Internal plumbing of a gate: its two valves plus the sockets that share a
/// channel inside the module (e.g. SP_IN merged with C1 on the inverter).
struct GateWiring {
    std::vector<ValveSpec> valves;
    std::vector<std::pair<SocketId, SocketId>> merges;

    bool operator==(const GateWiring&) const = default;
};

enum class GateType : std::uint8_t { Inverter, Buffer, Generic };

std::string_view to_string(GateType type) noexcept;

struct GateKind {
    GateType type = GateType::Inverter;
    GateWiring wiring;  // only meaningful for Generic

    static GateKind inverter() { return {GateType::Inverter, {}}; }
    static GateKind buffer() { return {GateType::Buffer, {}}; }
    static GateKind generic(GateWiring wiring) { return {GateType::Generic, std::move(wiring)}; }

    bool operator==(const GateKind&) const = default;
};

/// Effective wiring of a gate; the preconfigured inverter and buffer return
/// their fixed internal plumbing.
GateWiring resolved_wiring(const GateKind& gate);

/// Representative socket of the channel `socket` belongs to (smallest id in
/// its merge group).
SocketId local_node(const GateWiring& wiring, SocketId socket);

/// Sockets a tube may attach to.
std::vector<SocketId> exposed_sockets(const GateKind& gate);
bool is_exposed(const GateKind& gate, SocketId socket);

/// Representatives of the local channels that act as logic inputs, in
/// socket order. {T} for the modified gates.
std::vector<SocketId> input_sockets(const GateKind& gate);

/// Supply-class sockets carry the constant positive pressure.
bool is_supply_socket(SocketId socket) noexcept;
bool is_output_socket(SocketId socket) noexcept;

/// Throws IncompleteWiring unless the wiring has exactly one NO and one NC
/// valve, every valve field bound, distinct valve ends, and some valve
/// reaching the output channel.
void check_wiring_complete(const GateWiring& wiring);

inline constexpr double kDefaultOutputRatio = 0.775;
inline constexpr double kDefaultTubeInnerDiameter = 2.0;

struct ModuleSpec {
    std::string id;
    GateKind gate;
    std::optional<BellowSpec> bellow;
    /// Per-module plateau override (e.g. a leaky module that reads higher);
    /// unset means the simulation-wide default.
    std::optional<double> output_ratio;

    [[nodiscard]] double ratio_or(double fallback) const { return output_ratio.value_or(fallback); }

    bool operator==(const ModuleSpec&) const = default;
};

struct NodeRef {
    std::string module;
    SocketId socket = SocketId::SpIn;

    [[nodiscard]] std::string str() const;

    bool operator==(const NodeRef&) const = default;
};

/// Natural order on module ids ("M2" < "M10"), then socket order.
bool operator<(const NodeRef& a, const NodeRef& b);
bool natural_less(std::string_view a, std::string_view b);

struct TubeSpec {
    NodeRef from;
    NodeRef to;
    double length = 140.0;  // mm
    double inner_diameter = kDefaultTubeInnerDiameter;  // mm

    bool operator==(const TubeSpec&) const = default;
};

struct SupplySpec {
    NodeRef node;
    double pressure = 2.0;  // bar gauge

    bool operator==(const SupplySpec&) const = default;
};

struct Netlist {
    std::vector<ModuleSpec> modules;
    std::vector<TubeSpec> tubes;
    std::vector<SupplySpec> supplies;
    std::vector<NodeRef> stoppers;

    [[nodiscard]] const ModuleSpec* find_module(std::string_view id) const;

    bool operator==(const Netlist&) const = default;
};

/// Sorted copy: modules by id, tubes/supplies/stoppers by endpoint. Two
/// netlists describe the same circuit iff their canonical forms are equal.
Netlist canonical(Netlist netlist);
bool structurally_equal(const Netlist& a, const Netlist& b);

/// Builders. An empty id draws the next "M<k>" from a process-wide counter.
ModuleSpec build_inverter(std::optional<BellowSpec> bellow = std::nullopt, std::string id = {});
ModuleSpec build_buffer(std::optional<BellowSpec> bellow = std::nullopt, std::string id = {});
ModuleSpec build_generic(GateWiring wiring, std::optional<BellowSpec> bellow = std::nullopt,
                         std::string id = {});

/// One inverter followed by n-1 buffers: supply daisy-chained through the
/// SP_THRU ports and stoppered at the last module, each OUT_NEXT feeding the
/// next trigger, the last output fed back to the inverter. Modules are named
/// M1..Mn. Throws InvalidArgument for n < 1.
Netlist build_ring_oscillator(int n_modules, const BellowSpec& bellow, double supply_pressure,
                              double tube_length,
                              double tube_inner_diameter = kDefaultTubeInnerDiameter);

struct Diagnostic {
    std::string code;
    std::string message;
    std::string location;

    bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;

    [[nodiscard]] bool ok() const noexcept { return errors.empty(); }
    [[nodiscard]] bool has_error(std::string_view code) const;
    [[nodiscard]] bool has_warning(std::string_view code) const;
};

/// Structural checks. Error codes: DUPLICATE_ID, EMPTY_ID, BAD_OUTPUT_RATIO,
/// BAD_BELLOW, INCOMPLETE_WIRING, UNKNOWN_MODULE, UNKNOWN_SOCKET, BAD_TUBE,
/// SUPPLY_CONFLICT, BAD_SUPPLY, STOPPER_CONNECTED, UNSUPPLIED_GATE,
/// DANGLING_TRIGGER. Warnings: DUPLICATE_SUPPLY, OPEN_SUPPLY_PORT.
ValidationReport validate(const Netlist& netlist);

}  // namespace plg
