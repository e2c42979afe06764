#include "plg/circuit.hpp"

#include "plg/error.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <tuple>

namespace plg {

const char* to_string(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "ParseError";
    case Errc::InvalidNetlist: return "InvalidNetlist";
    case Errc::IncompleteWiring: return "IncompleteWiring";
    case Errc::CombinationalLoop: return "CombinationalLoop";
    case Errc::NotOscillating: return "NotOscillating";
    case Errc::ContentionDetected: return "ContentionDetected";
    case Errc::ThresholdUnreachable: return "ThresholdUnreachable";
    case Errc::CalibrationFailed: return "CalibrationFailed";
    case Errc::Underdetermined: return "Underdetermined";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::UnmappedSegment: return "UnmappedSegment";
    case Errc::NumericalInstability: return "NumericalInstability";
    case Errc::TraceTooShort: return "TraceTooShort";
    case Errc::Io: return "IoError";
    }
    return "Unknown";
}

char to_char(LogicLevel level) noexcept {
    switch (level) {
    case LogicLevel::Low: return '0';
    case LogicLevel::High: return '1';
    case LogicLevel::Indeterminate: return 'X';
    }
    return 'X';
}

LogicLevel logic_not(LogicLevel level) noexcept {
    switch (level) {
    case LogicLevel::Low: return LogicLevel::High;
    case LogicLevel::High: return LogicLevel::Low;
    default: return LogicLevel::Indeterminate;
    }
}

namespace {

constexpr std::array<std::string_view, 8> kSocketNames = {
    "SP_IN", "SP_THRU", "T", "OUT", "OUT_NEXT", "C1", "C2", "EXHAUST"};

}  // namespace

std::string_view to_string(SocketId socket) noexcept {
    return kSocketNames[static_cast<std::size_t>(socket)];
}

std::optional<SocketId> parse_socket(std::string_view text) noexcept {
    for (std::size_t i = 0; i < kSocketNames.size(); ++i) {
        if (kSocketNames[i] == text) return static_cast<SocketId>(i);
    }
    return std::nullopt;
}

std::string_view to_string(ValveKind kind) noexcept {
    return kind == ValveKind::NormallyOpen ? "NO" : "NC";
}

std::string_view to_string(GateType type) noexcept {
    switch (type) {
    case GateType::Inverter: return "inverter";
    case GateType::Buffer: return "buffer";
    case GateType::Generic: return "generic";
    }
    return "generic";
}

GateWiring resolved_wiring(const GateKind& gate) {
    using S = SocketId;
    switch (gate.type) {
    case GateType::Inverter:
        // Supply merged with C1. T LOW: V1 passes supply to OUT.
        // T HIGH: V1 pinched, V2 vents OUT.
        return GateWiring{
            {ValveSpec{ValveKind::NormallyOpen, S::SpIn, S::Out, S::T},
             ValveSpec{ValveKind::NormallyClosed, S::Out, S::Exhaust, S::T}},
            {{S::SpIn, S::SpThru}, {S::SpIn, S::C1}, {S::Out, S::OutNext}}};
    case GateType::Buffer:
        // Supply merged with C2. T HIGH: V2 passes supply to OUT.
        // T LOW: V1 vents OUT.
        return GateWiring{
            {ValveSpec{ValveKind::NormallyOpen, S::Out, S::Exhaust, S::T},
             ValveSpec{ValveKind::NormallyClosed, S::SpIn, S::Out, S::T}},
            {{S::SpIn, S::SpThru}, {S::SpIn, S::C2}, {S::Out, S::OutNext}}};
    case GateType::Generic:
        return gate.wiring;
    }
    return gate.wiring;
}

SocketId local_node(const GateWiring& wiring, SocketId socket) {
    // Merge groups are tiny; a fixed-point sweep is enough.
    std::array<int, 8> parent{};
    for (int i = 0; i < 8; ++i) parent[i] = i;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [a, b] : wiring.merges) {
            const int ia = static_cast<int>(a);
            const int ib = static_cast<int>(b);
            const int m = std::min(parent[ia], parent[ib]);
            if (parent[ia] != m || parent[ib] != m) {
                parent[ia] = parent[ib] = m;
                changed = true;
            }
        }
    }
    return static_cast<SocketId>(parent[static_cast<int>(socket)]);
}

std::vector<SocketId> exposed_sockets(const GateKind& gate) {
    using S = SocketId;
    if (gate.type == GateType::Generic) {
        return {S::SpIn, S::SpThru, S::T, S::Out, S::OutNext, S::C1, S::C2};
    }
    return {S::SpIn, S::SpThru, S::T, S::Out, S::OutNext};
}

bool is_exposed(const GateKind& gate, SocketId socket) {
    const auto sockets = exposed_sockets(gate);
    return std::find(sockets.begin(), sockets.end(), socket) != sockets.end();
}

bool is_supply_socket(SocketId socket) noexcept {
    return socket == SocketId::SpIn || socket == SocketId::SpThru;
}

bool is_output_socket(SocketId socket) noexcept {
    return socket == SocketId::Out || socket == SocketId::OutNext;
}

namespace {

// A local channel's role is decided by the sockets merged into it.
bool channel_has(const GateWiring& wiring, SocketId rep, bool (*pred)(SocketId) noexcept) {
    for (SocketId s : kAllSockets) {
        if (local_node(wiring, s) == rep && pred(s)) return true;
    }
    return false;
}

bool is_exhaust(SocketId s) noexcept { return s == SocketId::Exhaust; }

}  // namespace

std::vector<SocketId> input_sockets(const GateKind& gate) {
    if (gate.type != GateType::Generic) return {SocketId::T};
    const GateWiring& wiring = gate.wiring;
    std::vector<SocketId> reps;
    auto consider = [&](const std::optional<SocketId>& s) {
        if (!s) return;
        const SocketId rep = local_node(wiring, *s);
        if (channel_has(wiring, rep, is_supply_socket) || channel_has(wiring, rep, is_output_socket) ||
            channel_has(wiring, rep, is_exhaust)) {
            return;
        }
        if (std::find(reps.begin(), reps.end(), rep) == reps.end()) reps.push_back(rep);
    };
    for (const auto& v : wiring.valves) {
        consider(v.control);
        consider(v.tube_in);
        consider(v.tube_out);
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

void check_wiring_complete(const GateWiring& wiring) {
    if (wiring.valves.size() != 2) {
        throw IncompleteWiring("generic gate needs exactly two valves, got " +
                               std::to_string(wiring.valves.size()));
    }
    if (wiring.valves[0].kind == wiring.valves[1].kind) {
        throw IncompleteWiring("generic gate needs one NO and one NC valve");
    }
    bool touches_out = false;
    for (std::size_t i = 0; i < wiring.valves.size(); ++i) {
        const auto& v = wiring.valves[i];
        const std::string tag = "valve " + std::to_string(i + 1) + " (" + std::string(to_string(v.kind)) + ")";
        if (!v.tube_in || !v.tube_out || !v.control) {
            throw IncompleteWiring(tag + " has an unbound control or tube end");
        }
        if (local_node(wiring, *v.tube_in) == local_node(wiring, *v.tube_out)) {
            throw IncompleteWiring(tag + " connects a channel to itself");
        }
        if (*v.control == SocketId::Exhaust) {
            throw IncompleteWiring(tag + " is controlled by the exhaust");
        }
        const SocketId out = local_node(wiring, SocketId::Out);
        if (local_node(wiring, *v.tube_in) == out || local_node(wiring, *v.tube_out) == out) {
            touches_out = true;
        }
    }
    if (!touches_out) throw IncompleteWiring("no valve reaches OUT");
}

std::string NodeRef::str() const { return module + "." + std::string(to_string(socket)); }

bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t ei = i;
            std::size_t ej = j;
            while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
            while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
            // Compare digit runs numerically without overflow: strip zeros, then length, then text.
            std::string_view ra = a.substr(i, ei - i);
            std::string_view rb = b.substr(j, ej - j);
            const auto strip = [](std::string_view r) {
                const auto p = r.find_first_not_of('0');
                return p == std::string_view::npos ? std::string_view{} : r.substr(p);
            };
            const auto sa = strip(ra);
            const auto sb = strip(rb);
            if (sa.size() != sb.size()) return sa.size() < sb.size();
            if (sa != sb) return sa < sb;
            if (ra.size() != rb.size()) return ra.size() < rb.size();
            i = ei;
            j = ej;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return (a.size() - i) < (b.size() - j);
}

bool operator<(const NodeRef& a, const NodeRef& b) {
    if (a.module != b.module) return natural_less(a.module, b.module);
    return a.socket < b.socket;
}

const ModuleSpec* Netlist::find_module(std::string_view id) const {
    for (const auto& m : modules) {
        if (m.id == id) return &m;
    }
    return nullptr;
}

Netlist canonical(Netlist n) {
    std::stable_sort(n.modules.begin(), n.modules.end(),
                     [](const ModuleSpec& a, const ModuleSpec& b) { return natural_less(a.id, b.id); });
    std::stable_sort(n.tubes.begin(), n.tubes.end(), [](const TubeSpec& a, const TubeSpec& b) {
        if (!(a.from == b.from)) return a.from < b.from;
        if (!(a.to == b.to)) return a.to < b.to;
        return std::tie(a.length, a.inner_diameter) < std::tie(b.length, b.inner_diameter);
    });
    std::stable_sort(n.supplies.begin(), n.supplies.end(), [](const SupplySpec& a, const SupplySpec& b) {
        if (!(a.node == b.node)) return a.node < b.node;
        return a.pressure < b.pressure;
    });
    std::stable_sort(n.stoppers.begin(), n.stoppers.end());
    return n;
}

bool structurally_equal(const Netlist& a, const Netlist& b) { return canonical(a) == canonical(b); }

namespace {

std::atomic<int> g_module_counter{0};

std::string next_id(std::string id) {
    if (!id.empty()) return id;
    return "M" + std::to_string(++g_module_counter);
}

}  // namespace

ModuleSpec build_inverter(std::optional<BellowSpec> bellow, std::string id) {
    return ModuleSpec{next_id(std::move(id)), GateKind::inverter(), bellow, std::nullopt};
}

ModuleSpec build_buffer(std::optional<BellowSpec> bellow, std::string id) {
    return ModuleSpec{next_id(std::move(id)), GateKind::buffer(), bellow, std::nullopt};
}

ModuleSpec build_generic(GateWiring wiring, std::optional<BellowSpec> bellow, std::string id) {
    return ModuleSpec{next_id(std::move(id)), GateKind::generic(std::move(wiring)), bellow,
                      std::nullopt};
}

Netlist build_ring_oscillator(int n_modules, const BellowSpec& bellow, double supply_pressure,
                              double tube_length, double tube_inner_diameter) {
    if (n_modules < 1) {
        throw InvalidArgument("ring oscillator needs at least one module, got " + std::to_string(n_modules));
    }
    Netlist n;
    auto id = [](int i) { return "M" + std::to_string(i + 1); };
    for (int i = 0; i < n_modules; ++i) {
        n.modules.push_back(i == 0 ? build_inverter(bellow, id(i)) : build_buffer(bellow, id(i)));
    }
    n.supplies.push_back({{id(0), SocketId::SpIn}, supply_pressure});
    for (int i = 0; i + 1 < n_modules; ++i) {
        n.tubes.push_back({{id(i), SocketId::SpThru}, {id(i + 1), SocketId::SpIn}, tube_length,
                           tube_inner_diameter});
        n.tubes.push_back({{id(i), SocketId::OutNext}, {id(i + 1), SocketId::T}, tube_length,
                           tube_inner_diameter});
    }
    n.tubes.push_back({{id(n_modules - 1), SocketId::OutNext}, {id(0), SocketId::T}, tube_length,
                       tube_inner_diameter});
    n.stoppers.push_back({id(n_modules - 1), SocketId::SpThru});
    return canonical(std::move(n));
}

bool ValidationReport::has_error(std::string_view code) const {
    return std::any_of(errors.begin(), errors.end(), [&](const Diagnostic& d) { return d.code == code; });
}

bool ValidationReport::has_warning(std::string_view code) const {
    return std::any_of(warnings.begin(), warnings.end(), [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace plg
