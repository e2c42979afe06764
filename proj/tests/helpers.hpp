#pragma once

#include "plg/circuit.hpp"

#include <string>

namespace testing_util {

inline plg::ValveSpec valve(plg::ValveKind k, plg::SocketId control, plg::SocketId in, plg::SocketId out) {
    return {k, in, out, control};
}

// Same plumbing as fixtures/and2.plg: a on C1 (merged with C2), b on T.
inline plg::GateWiring and_wiring() {
    using plg::SocketId;
    using plg::ValveKind;
    return {{valve(ValveKind::NormallyClosed, SocketId::C2, SocketId::T, SocketId::Out),
             valve(ValveKind::NormallyOpen, SocketId::C1, SocketId::Out, SocketId::Exhaust)},
            {{SocketId::C1, SocketId::C2}}};
}

// Same plumbing as fixtures/or2.plg: a on C1, b on T, supply on SP_IN.
inline plg::GateWiring or_wiring() {
    using plg::SocketId;
    using plg::ValveKind;
    return {{valve(ValveKind::NormallyClosed, SocketId::C1, SocketId::SpIn, SocketId::Out),
             valve(ValveKind::NormallyOpen, SocketId::C1, SocketId::T, SocketId::Out)},
            {}};
}

inline plg::Netlist ring(int n, double supply = 2.0) {
    return plg::build_ring_oscillator(n, plg::BellowSpec{}, supply, 140.0);
}

inline std::string fixture(const std::string& name) { return std::string(PLGSIM_FIXTURE_DIR) + "/" + name; }

}  // namespace testing_util
