#include "plg/actuator.hpp"
#include "plg/circuit.hpp"
#include "plg/locomotion.hpp"
#include "plg/logic.hpp"
#include "plg/netlist_dsl.hpp"
#include "plg/pipeline.hpp"
#include "plg/pneumo.hpp"

#include <benchmark/benchmark.h>

namespace {

plg::Netlist ring(int n) { return plg::build_ring_oscillator(n, plg::BellowSpec{}, 2.0, 140.0); }

void BM_PressureRing(benchmark::State& state) {
    const auto n = ring(static_cast<int>(state.range(0)));
    const plg::PneumoParams p;
    for (auto _ : state) benchmark::DoNotOptimize(plg::simulate_pressure(n, p, 60.0));
    state.SetLabel("60 s simulated");
}
BENCHMARK(BM_PressureRing)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LogicRing(benchmark::State& state) {
    const auto n = ring(static_cast<int>(state.range(0)));
    plg::DelayModel d;
    d.uniform = {0.3, 0.2};
    for (auto _ : state) benchmark::DoNotOptimize(plg::simulate_logic(n, d, 600.0));
}
BENCHMARK(BM_LogicRing)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ParseSerialize(benchmark::State& state) {
    const std::string text = plg::serialize_netlist(ring(32));
    for (auto _ : state) benchmark::DoNotOptimize(plg::serialize_netlist(plg::parse_netlist(text)));
}
BENCHMARK(BM_ParseSerialize);

void BM_FitElongation(benchmark::State& state) {
    std::vector<plg::ElongationDataPoint> pts;
    for (const auto& d : plg::reference_elongation_points()) {
        if (d.pressure == 2.0) pts.push_back(d);
    }
    for (auto _ : state) benchmark::DoNotOptimize(plg::fit_elongation(pts));
}
BENCHMARK(BM_FitElongation);

void BM_Locomotion(benchmark::State& state) {
    plg::RobotConfig cfg;
    cfg.duration = 30.0;
    const auto prepared = plg::prepare_drive(cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(plg::simulate_locomotion(cfg.body, cfg.friction, prepared.drive, cfg.locomotion_dt));
    }
    state.SetLabel("30 s simulated");
}
BENCHMARK(BM_Locomotion)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
