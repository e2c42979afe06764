#include "helpers.hpp"

#include "plg/circuit.hpp"
#include "plg/error.hpp"
#include "plg/topology.hpp"

#include <gtest/gtest.h>

using namespace plg;
using testing_util::ring;

TEST(Sockets, NamesRoundTrip) {
    for (SocketId s : kAllSockets) {
        const auto parsed = parse_socket(to_string(s));
        ASSERT_TRUE(parsed.has_value()) << to_string(s);
        EXPECT_EQ(*parsed, s);
    }
    EXPECT_FALSE(parse_socket("S_X").has_value());
    EXPECT_EQ(to_string(SocketId::OutNext), "OUT_NEXT");
}

TEST(Bellow, PresetsAndRange) {
    EXPECT_NO_THROW(BellowSpec{}.check());
    for (double t : {bellow_presets::kThin, bellow_presets::kStandard, bellow_presets::kThick}) {
        EXPECT_NO_THROW(BellowSpec::with_thickness(t).check());
    }
    EXPECT_THROW(BellowSpec::with_thickness(0.9).check(), InvalidArgument);
    EXPECT_THROW(BellowSpec::with_thickness(3.1).check(), InvalidArgument);
    BellowSpec b;
    b.pitch = 0.0;
    EXPECT_THROW(b.check(), InvalidArgument);
}

TEST(Builders, InverterAndBufferExposeTheSameSockets) {
    const auto inv = build_inverter(std::nullopt, "A");
    const auto buf = build_buffer(std::nullopt, "B");
    EXPECT_EQ(inv.gate.type, GateType::Inverter);
    EXPECT_EQ(exposed_sockets(inv.gate), exposed_sockets(buf.gate));
    EXPECT_FALSE(is_exposed(inv.gate, SocketId::C1));
    EXPECT_FALSE(is_exposed(inv.gate, SocketId::Exhaust));
    EXPECT_EQ(input_sockets(inv.gate), std::vector<SocketId>{SocketId::T});
    EXPECT_NO_THROW(check_wiring_complete(resolved_wiring(inv.gate)));
    EXPECT_NO_THROW(check_wiring_complete(resolved_wiring(buf.gate)));
}

TEST(Builders, EmptyIdDrawsFreshNames) {
    const auto a = build_buffer();
    const auto b = build_buffer();
    EXPECT_FALSE(a.id.empty());
    EXPECT_NE(a.id, b.id);
}

TEST(Builders, GenericWiringMustBeComplete) {
    GateWiring w = testing_util::and_wiring();
    EXPECT_NO_THROW(check_wiring_complete(w));
    w.valves[0].control.reset();
    EXPECT_THROW(check_wiring_complete(w), IncompleteWiring);
    GateWiring two_no = testing_util::and_wiring();
    two_no.valves[0].kind = ValveKind::NormallyOpen;
    EXPECT_THROW(check_wiring_complete(two_no), IncompleteWiring);
    GateWiring one = testing_util::and_wiring();
    one.valves.pop_back();
    EXPECT_THROW(check_wiring_complete(one), IncompleteWiring);
}

TEST(Builders, GenericInputsAreMergeRepresentatives) {
    const auto g = GateKind::generic(testing_util::and_wiring());
    EXPECT_EQ(input_sockets(g), (std::vector<SocketId>{SocketId::T, SocketId::C1}));
    EXPECT_EQ(local_node(g.wiring, SocketId::C2), SocketId::C1);
}

TEST(Ring, StructureOfFourModules) {
    const Netlist n = ring(4);
    ASSERT_EQ(n.modules.size(), 4u);
    EXPECT_EQ(n.modules[0].id, "M1");
    EXPECT_EQ(n.modules[0].gate.type, GateType::Inverter);
    for (int i = 1; i < 4; ++i) EXPECT_EQ(n.modules[i].gate.type, GateType::Buffer);
    EXPECT_EQ(n.tubes.size(), 7u);
    ASSERT_EQ(n.supplies.size(), 1u);
    EXPECT_EQ(n.supplies[0].node, (NodeRef{"M1", SocketId::SpIn}));
    ASSERT_EQ(n.stoppers.size(), 1u);
    EXPECT_EQ(n.stoppers[0], (NodeRef{"M4", SocketId::SpThru}));
    const auto r = validate(n);
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Ring, ValidForEverySizeUpTo32) {
    for (int k = 1; k <= 32; ++k) {
        const auto r = validate(ring(k));
        EXPECT_TRUE(r.ok()) << "n=" << k;
        EXPECT_TRUE(r.warnings.empty()) << "n=" << k;
    }
}

TEST(Ring, RejectsZeroModules) { EXPECT_THROW(ring(0), InvalidArgument); }

TEST(Ring, NaturalIdOrder) {
    const Netlist n = ring(12);
    EXPECT_EQ(n.modules[1].id, "M2");
    EXPECT_EQ(n.modules[9].id, "M10");
    EXPECT_TRUE(natural_less("M2", "M10"));
    EXPECT_FALSE(natural_less("M10", "M2"));
}

TEST(Topology, RingNetsAndSuccessors) {
    const Netlist n = ring(4);
    const NetGraph g(n);
    // One supply net shared by all modules.
    const int sup = g.net_of({"M1", SocketId::SpIn});
    for (const char* id : {"M2", "M3", "M4"}) EXPECT_EQ(g.net_of({id, SocketId::SpIn}), sup);
    ASSERT_TRUE(g.supply_pressure(sup).has_value());
    EXPECT_DOUBLE_EQ(*g.supply_pressure(sup), 2.0);
    // Each output drives the next trigger.
    EXPECT_EQ(g.net_of({"M1", SocketId::OutNext}), g.net_of({"M2", SocketId::T}));
    EXPECT_EQ(g.net_of({"M4", SocketId::OutNext}), g.net_of({"M1", SocketId::T}));
    EXPECT_EQ(g.driver_of(g.net_of({"M2", SocketId::T})), g.module_index("M1"));
    const auto succ = g.trigger_successors();
    EXPECT_EQ(succ[g.module_index("M4")], std::vector<int>{g.module_index("M1")});
    EXPECT_EQ(g.valves().size(), 8u);
    EXPECT_EQ(g.net_of({"M9", SocketId::T}), -1);
}

TEST(Canonical, OrderIndependentEquality) {
    Netlist a = ring(3);
    Netlist b = a;
    std::reverse(b.modules.begin(), b.modules.end());
    std::reverse(b.tubes.begin(), b.tubes.end());
    EXPECT_NE(a, b);
    EXPECT_TRUE(structurally_equal(a, b));
    b.tubes[0].length += 1.0;
    EXPECT_FALSE(structurally_equal(a, b));
}

namespace {

Netlist single_buffer_driven_by_supply() {
    Netlist n;
    n.modules.push_back(build_buffer(std::nullopt, "B1"));
    n.supplies.push_back({{"B1", SocketId::SpIn}, 2.0});
    n.supplies.push_back({{"B1", SocketId::T}, 2.0});
    n.stoppers.push_back({"B1", SocketId::SpThru});
    return n;
}

}  // namespace

TEST(Validate, ErrorCodes) {
    {
        Netlist n = ring(2);
        n.modules[1].id = "M1";
        EXPECT_TRUE(validate(n).has_error("DUPLICATE_ID"));
    }
    {
        Netlist n = ring(2);
        n.modules[0].id.clear();
        EXPECT_TRUE(validate(n).has_error("EMPTY_ID"));
    }
    {
        Netlist n = ring(2);
        n.modules[0].output_ratio = 1.5;
        EXPECT_TRUE(validate(n).has_error("BAD_OUTPUT_RATIO"));
    }
    {
        Netlist n = ring(2);
        BellowSpec thin;
        thin.wall_thickness = 0.5;
        n.modules[0].bellow = thin;
        EXPECT_TRUE(validate(n).has_error("BAD_BELLOW"));
    }
    {
        Netlist n = ring(2);
        n.tubes.push_back({{"M9", SocketId::Out}, {"M1", SocketId::T}});
        EXPECT_TRUE(validate(n).has_error("UNKNOWN_MODULE"));
    }
    {
        Netlist n = ring(2);
        n.tubes.push_back({{"M1", SocketId::C1}, {"M2", SocketId::Out}});
        EXPECT_TRUE(validate(n).has_error("UNKNOWN_SOCKET"));
    }
    {
        Netlist n = ring(2);
        n.tubes[0].length = 0.0;
        EXPECT_TRUE(validate(n).has_error("BAD_TUBE"));
    }
    {
        Netlist n = ring(2);
        n.supplies.push_back({{"M2", SocketId::SpIn}, 2.3});
        EXPECT_TRUE(validate(n).has_error("SUPPLY_CONFLICT"));
    }
    {
        Netlist n = ring(2);
        n.supplies.push_back({{"M2", SocketId::SpIn}, 2.0});
        const auto r = validate(n);
        EXPECT_TRUE(r.ok());
        EXPECT_TRUE(r.has_warning("DUPLICATE_SUPPLY"));
    }
    {
        Netlist n = ring(2);
        n.supplies[0].pressure = -1.0;
        EXPECT_TRUE(validate(n).has_error("BAD_SUPPLY"));
    }
    {
        Netlist n = ring(2);
        n.stoppers.push_back({"M1", SocketId::SpThru});
        EXPECT_TRUE(validate(n).has_error("STOPPER_CONNECTED"));
    }
    {
        Netlist n = ring(2);
        n.supplies.clear();
        EXPECT_TRUE(validate(n).has_error("UNSUPPLIED_GATE"));
    }
    {
        Netlist n = ring(2);
        n.tubes.pop_back();  // feedback tube
        EXPECT_TRUE(validate(n).has_error("DANGLING_TRIGGER"));
    }
    {
        Netlist n = ring(2);
        n.stoppers.clear();
        const auto r = validate(n);
        EXPECT_TRUE(r.ok());
        EXPECT_TRUE(r.has_warning("OPEN_SUPPLY_PORT"));
    }
    {
        Netlist n;
        GateWiring w = testing_util::and_wiring();
        w.valves[1].tube_out.reset();
        ModuleSpec g;
        g.id = "G";
        g.gate = GateKind::generic(w);
        n.modules.push_back(g);
        EXPECT_TRUE(validate(n).has_error("INCOMPLETE_WIRING"));
    }
}

TEST(Validate, SuppliedTriggerIsNotDangling) {
    const auto r = validate(single_buffer_driven_by_supply());
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Errors, CodesHaveNames) {
    EXPECT_STREQ(to_string(Errc::ContentionDetected), "ContentionDetected");
    const ErrorOf<Errc::NotOscillating> e("x");
    EXPECT_EQ(e.code(), Errc::NotOscillating);
}
