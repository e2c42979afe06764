#include "helpers.hpp"

#include "plg/error.hpp"
#include "plg/logic.hpp"

#include <gtest/gtest.h>

using namespace plg;
using testing_util::ring;

namespace {

constexpr LogicLevel L = LogicLevel::Low;
constexpr LogicLevel H = LogicLevel::High;
constexpr LogicLevel X = LogicLevel::Indeterminate;

// Buffer B1 with its trigger held HIGH by a supply, feeding inverter I1.
Netlist buffer_into_inverter() {
    Netlist n;
    n.modules.push_back(build_buffer(std::nullopt, "B1"));
    n.modules.push_back(build_inverter(std::nullopt, "I1"));
    n.supplies.push_back({{"B1", SocketId::SpIn}, 2.0});
    n.supplies.push_back({{"B1", SocketId::T}, 2.0});
    n.supplies.push_back({{"I1", SocketId::SpIn}, 2.0});
    n.tubes.push_back({{"B1", SocketId::OutNext}, {"I1", SocketId::T}});
    n.stoppers.push_back({"B1", SocketId::SpThru});
    n.stoppers.push_back({"I1", SocketId::SpThru});
    return n;
}

// Self-looped inverter M1 whose output also triggers buffer B.
Netlist oscillator_with_follower() {
    Netlist n = ring(1);
    n.modules.push_back(build_buffer(std::nullopt, "B"));
    n.supplies.push_back({{"B", SocketId::SpIn}, 2.0});
    n.stoppers.push_back({"B", SocketId::SpThru});
    n.tubes.push_back({{"M1", SocketId::Out}, {"B", SocketId::T}});
    return n;
}

}  // namespace

TEST(Gate, InverterAndBuffer) {
    const auto inv = build_inverter().gate;
    const auto buf = build_buffer().gate;
    EXPECT_EQ(evaluate_gate(inv, {L}), H);
    EXPECT_EQ(evaluate_gate(inv, {H}), L);
    EXPECT_EQ(evaluate_gate(buf, {L}), L);
    EXPECT_EQ(evaluate_gate(buf, {H}), H);
}

TEST(Gate, IndeterminateInputPropagates) {
    EXPECT_EQ(evaluate_gate(build_inverter().gate, {X}), X);
    EXPECT_EQ(evaluate_gate(build_buffer().gate, {X}), X);
}

TEST(Gate, UnsuppliedInverterNeverDrivesHigh) {
    EXPECT_NE(evaluate_gate(build_inverter().gate, {L}, false), H);
}

TEST(Gate, WrongInputCountIsRejected) {
    EXPECT_THROW(evaluate_gate(build_inverter().gate, {L, L}), InvalidArgument);
}

TEST(Gate, GenericAnd) {
    const auto g = GateKind::generic(testing_util::and_wiring());
    // Inputs are (T, C1) = (b, a).
    EXPECT_EQ(evaluate_gate(g, {L, L}), L);
    EXPECT_EQ(evaluate_gate(g, {L, H}), L);
    EXPECT_EQ(evaluate_gate(g, {H, L}), L);
    EXPECT_EQ(evaluate_gate(g, {H, H}), H);
    // A LOW control input decides the output regardless of the other.
    EXPECT_EQ(evaluate_gate(g, {X, L}), L);
    EXPECT_EQ(evaluate_gate(g, {X, H}), X);
}

TEST(Gate, GenericOr) {
    const auto g = GateKind::generic(testing_util::or_wiring());
    EXPECT_EQ(evaluate_gate(g, {L, L}), L);
    EXPECT_EQ(evaluate_gate(g, {L, H}), H);
    EXPECT_EQ(evaluate_gate(g, {H, L}), H);
    EXPECT_EQ(evaluate_gate(g, {H, H}), H);
    EXPECT_EQ(evaluate_gate(g, {X, H}), H);
    EXPECT_EQ(evaluate_gate(g, {X, L}), X);
}

TEST(Gate, ContentionIsIndeterminate) {
    // With C1 LOW and C2 HIGH the output joins both supply and exhaust.
    GateWiring w{{testing_util::valve(ValveKind::NormallyOpen, SocketId::C1, SocketId::SpIn, SocketId::Out),
                  testing_util::valve(ValveKind::NormallyClosed, SocketId::C2, SocketId::Out, SocketId::Exhaust)},
                 {}};
    const auto g = GateKind::generic(w);
    ASSERT_EQ(input_sockets(g), (std::vector<SocketId>{SocketId::C1, SocketId::C2}));
    EXPECT_EQ(evaluate_gate(g, {L, H}), X);
    EXPECT_EQ(evaluate_gate(g, {L, L}), H);
    EXPECT_EQ(evaluate_gate(g, {H, H}), L);
    // Both valves closed: nothing reaches OUT.
    EXPECT_EQ(evaluate_gate(g, {H, L}), X);
}

TEST(TruthTables, InverterFormat) {
    const auto t = truth_table(build_inverter().gate);
    EXPECT_EQ(t.format(), "T  OUT\nL  H\nH  L\n");
    EXPECT_EQ(t.lookup({H}), L);
    EXPECT_THROW((void)t.lookup({X}), InvalidArgument);
}

TEST(TruthTables, GenericAndRowsInOrder) {
    const auto t = truth_table(GateKind::generic(testing_util::and_wiring()));
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_EQ(t.rows[0].first, (std::vector<LogicLevel>{L, L}));
    EXPECT_EQ(t.rows[3].first, (std::vector<LogicLevel>{H, H}));
    EXPECT_EQ(t.format().substr(0, t.format().find('\n')), "T  C1  OUT");
}

TEST(TruthTables, IncompleteGenericThrows) {
    GateWiring w = testing_util::and_wiring();
    w.valves[0].tube_in.reset();
    EXPECT_THROW(truth_table(GateKind::generic(w)), IncompleteWiring);
}

TEST(Combinational, SteadyStateOfAChain) {
    const auto levels = eval_combinational(buffer_into_inverter());
    EXPECT_EQ(levels.at({"B1", SocketId::Out}), H);
    EXPECT_EQ(levels.at({"I1", SocketId::T}), H);
    EXPECT_EQ(levels.at({"I1", SocketId::Out}), L);
    EXPECT_EQ(levels.at({"I1", SocketId::OutNext}), L);
}

TEST(Combinational, InputOverridesAndUndrivenTriggers) {
    Netlist n = buffer_into_inverter();
    n.supplies.erase(n.supplies.begin() + 1);  // B1.T now undriven
    EXPECT_EQ(eval_combinational(n).at({"I1", SocketId::Out}), H);
    const auto forced = eval_combinational(n, {{{"B1", SocketId::T}, H}});
    EXPECT_EQ(forced.at({"I1", SocketId::Out}), L);
    const auto unknown = eval_combinational(n, {{{"B1", SocketId::T}, X}});
    EXPECT_EQ(unknown.at({"I1", SocketId::Out}), X);
    EXPECT_THROW(eval_combinational(n, {{{"Q", SocketId::T}, H}}), InvalidArgument);
}

TEST(Combinational, RingIsALoop) {
    EXPECT_THROW(eval_combinational(ring(4)), CombinationalLoop);
    EXPECT_THROW(eval_combinational(ring(1)), CombinationalLoop);
}

TEST(FeedbackLoops, RingHasOneCycle) {
    const auto loops = find_feedback_loops(ring(4));
    ASSERT_EQ(loops.size(), 1u);
    EXPECT_EQ(loops[0], (std::vector<std::string>{"M1", "M2", "M3", "M4"}));
    EXPECT_TRUE(find_feedback_loops(buffer_into_inverter()).empty());
    EXPECT_EQ(find_feedback_loops(ring(1)), (std::vector<std::vector<std::string>>{{"M1"}}));
}

TEST(EventSim, RingPeriodIsStageCountTimesRiseAndFall) {
    for (int k = 1; k <= 8; ++k) {
        DelayModel d;
        d.uniform = {0.3, 0.5};
        const auto trace = simulate_logic(ring(k), d, 12.0 * k);
        EXPECT_NEAR(measure_period(trace, "M1", 2.0 * k), 0.8 * k, 1e-5) << "n=" << k;
    }
}

TEST(EventSim, EdgesTravelAroundTheRingInOrder) {
    DelayModel d;
    d.uniform = {0.4, 0.2};
    const auto trace = simulate_logic(ring(4), d, 30.0);
    EXPECT_EQ(cyclic_edge_order(trace, 5.0), (std::vector<std::string>{"M1", "M2", "M3", "M4"}));
}

TEST(EventSim, PerModuleDelaysAddUp) {
    DelayModel d;
    d.uniform = {0.3, 0.3};
    d.per_module["M2"] = {1.0, 0.1};
    const auto trace = simulate_logic(ring(3), d, 40.0);
    EXPECT_NEAR(measure_period(trace, "M3", 5.0), 0.6 + 0.6 + 1.1, 1e-5);
    EXPECT_NEAR(measure_period(simulate_logic(ring(3), d.scaled(2.0), 80.0), "M1", 10.0), 4.6, 1e-5);
}

TEST(EventSim, InertialDelaySwallowsShortPulses) {
    DelayModel d;
    d.uniform = {1.0, 1.0};
    d.per_module["B"] = {1.5, 0.2};
    const auto swallowed = simulate_logic(oscillator_with_follower(), d, 20.0);
    EXPECT_TRUE(swallowed.rising_edges("B").empty());
    EXPECT_EQ(swallowed.rising_edges("M1").size(), 10u);

    d.per_module["B"] = {0.5, 0.5};
    const auto follows = simulate_logic(oscillator_with_follower(), d, 20.0);
    const auto m1 = follows.rising_edges("M1");
    const auto b = follows.rising_edges("B");
    ASSERT_EQ(b.size(), m1.size());
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(b[i] - m1[i], 0.5, 1e-9);
}

TEST(EventSim, TraceQueries) {
    DelayModel d;
    d.uniform = {1.0, 1.0};
    const auto trace = simulate_logic(ring(1), d, 5.0);
    EXPECT_EQ(trace.at("M1", 0.5), L);
    EXPECT_EQ(trace.at("M1", 1.5), H);
    EXPECT_EQ(trace.at("M1", 2.5), L);
    EXPECT_THROW((void)trace.at("nope", 0.0), InvalidArgument);
    EXPECT_THROW(trace.rising_edges("nope"), InvalidArgument);
}

TEST(EventSim, StaticCircuitDoesNotOscillate) {
    const auto trace = simulate_logic(buffer_into_inverter(), DelayModel{}, 10.0);
    EXPECT_EQ(trace.at("B1", 9.0), H);
    EXPECT_EQ(trace.at("I1", 9.0), L);
    EXPECT_THROW(measure_period(trace, "B1"), NotOscillating);
}

TEST(EventSim, ArgumentChecks) {
    EXPECT_THROW(simulate_logic(ring(2), DelayModel{}, 0.0), InvalidArgument);
    DelayModel bad;
    bad.uniform.rise = 0.0;
    EXPECT_THROW(simulate_logic(ring(2), bad, 1.0), InvalidArgument);
    Netlist broken = ring(2);
    broken.tubes.pop_back();
    EXPECT_THROW(simulate_logic(broken, DelayModel{}, 1.0), InvalidNetlist);
}

TEST(EventSim, IsDeterministic) {
    DelayModel d;
    d.uniform = {0.37, 0.11};
    const auto a = simulate_logic(ring(5), d, 50.0);
    const auto b = simulate_logic(ring(5), d, 50.0);
    EXPECT_EQ(a.times, b.times);
    EXPECT_EQ(a.levels, b.levels);
}
