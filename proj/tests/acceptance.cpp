// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "config.hpp"
#include "harness.hpp"
#include "helpers.hpp"
#include "netlist_gen.hpp"
#include "oracles.hpp"

#include "plg/actuator.hpp"
#include "plg/locomotion.hpp"
#include "plg/logic.hpp"
#include "plg/netlist_dsl.hpp"
#include "plg/pipeline.hpp"
#include "plg/pneumo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <tuple>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_quiet(const std::vector<std::string>& args, std::string* out = nullptr) {
    std::ostringstream o, e;
    const int code = plgsim::run_cli(args, o, e);
    if (out) *out = o.str();
    return code;
}

Outcome truth_tables() {
    Outcome r;
    const auto t0 = Clock::now();
    std::string inv, buf;
    r.require(run_quiet({"truth-table", "inverter"}, &inv) == 0, "inverter exit code");
    r.require(run_quiet({"truth-table", "buffer"}, &buf) == 0, "buffer exit code");
    r.require(inv == "T  OUT\nL  H\nH  L\n", "inverter table");
    r.require(buf == "T  OUT\nL  L\nH  H\n", "buffer table");
    const double dt = seconds_since(t0);
    r.require(dt < 1.0, "runtime " + num(dt, 2) + " s");
    r.detail = r.pass ? "4 rows match, " + num(dt, 3) + " s" : r.detail;
    return r;
}

Outcome oscillator(const plg::PneumoParams& p) {
    Outcome r;
    const auto t0 = Clock::now();
    const plg::Netlist ring = testing_util::ring(4);
    const auto trace = plg::simulate_pressure(ring, p, 60.0);
    const auto digital = plg::digitize(trace, p);
    const double runtime = seconds_since(t0);
    // Skip the start-up transient: the first cycle builds up from 0 bar.
    const double settle = 12.0;
    const double period = plg::measure_period(digital, "M1", settle);
    r.require(std::abs(period - 5.98) <= 0.02 * 5.98, "pressure period " + num(period) + " s");

    const auto delays = plg::measured_delays(ring, p, digital, settle);
    const auto logic = plg::simulate_logic(ring, delays, 60.0);
    const double logic_period = plg::measure_period(logic, "M1", settle);
    r.require(std::abs(logic_period - period) <= 0.02 * period, "logic period " + num(logic_period) + " s");
    const std::vector<std::string> expected{"M1", "M2", "M3", "M4"};
    r.require(plg::cyclic_edge_order(digital, settle) == expected, "pressure edge order");
    r.require(plg::cyclic_edge_order(logic, settle) == expected, "logic edge order");
    r.require(runtime < 10.0, "runtime " + num(runtime, 2) + " s");
    if (r.pass) {
        r.detail = "pressure " + num(period) + " s, logic " + num(logic_period) + " s, order M1 M2 M3 M4, " +
                   num(runtime, 2) + " s for 60 s";
    }
    return r;
}

Outcome period_scaling(const plg::PneumoParams& p) {
    Outcome r;
    const plg::Netlist ring = testing_util::ring(4);
    const double base = plg::simulated_period(ring, p);
    std::string ratios;
    for (double k : {0.5, 2.0, 4.0}) {
        const double ratio = plg::simulated_period(ring, p.scaled(k)) / base;
        r.require(std::abs(ratio - k) <= 0.01 * k, "k=" + num(k, 1) + " ratio " + num(ratio));
        ratios += (ratios.empty() ? "" : ", ") + num(k, 1) + "->" + num(ratio);
    }
    if (r.pass) r.detail = "period ratios " + ratios;
    return r;
}

Outcome actuator_fit() {
    Outcome r;
    std::string detail;
    for (const auto& [pressure, bound, check_ad, check_value] :
         std::vector<std::tuple<double, double, double, double>>{{2.0, 0.3, 400.0, 10.8}, {2.3, 0.5, 800.0, 14.0}}) {
        std::vector<plg::ElongationDataPoint> pts;
        std::vector<double> ad, y;
        for (const auto& d : plg::reference_elongation_points()) {
            if (d.pressure != pressure) continue;
            pts.push_back(d);
            ad.push_back(d.actuation_duration);
            y.push_back(d.deformation);
        }
        const auto m = plg::fit_elongation(pts);
        const auto o = oracle::grid_search_exp(ad, y);
        const double oracle_rmse = std::sqrt(o.sse / static_cast<double>(ad.size()));
        const std::string tag = num(pressure, 1) + " bar";
        r.require(m.fit_rmse <= bound, tag + " rmse " + num(m.fit_rmse));
        r.require(m.fit_rmse <= oracle_rmse + 1e-3, tag + " worse than oracle (" + num(oracle_rmse) + ")");
        r.require(std::abs(m.x_sat - o.x_sat) <= 0.05 * o.x_sat && std::abs(m.tau - o.tau) <= 0.05 * o.tau,
                  tag + " parameters disagree with oracle");
        bool increasing = m.amplitude > 0.0 && m.tau > 0.0;
        for (double t = 0.0; t < 3000.0; t += 10.0) increasing = increasing && m.at(t + 10.0) > m.at(t);
        r.require(increasing, tag + " not strictly increasing");
        r.require(std::abs(m.at(check_ad) - check_value) <= bound,
                  tag + " x(" + num(check_ad, 0) + ") = " + num(m.at(check_ad)));
        detail += (detail.empty() ? "" : ", ") + tag + " rmse " + num(m.fit_rmse) + " (oracle " +
                  num(oracle_rmse) + ")";
    }
    if (r.pass) r.detail = detail;
    return r;
}

Outcome fatigue() {
    using plg::IntegrityStatus;
    Outcome r;
    r.require(plg::check_integrity(1.3, 2.0, 1000.0) == IntegrityStatus::FatigueFailure, "(1.3, 2.0, 1000)");
    r.require(plg::check_integrity(1.3, 2.3, 1000.0) == IntegrityStatus::FatigueFailure, "(1.3, 2.3, 1000)");
    for (double p : {0.5, 1.0, 2.0, 2.3, 3.0}) {
        for (double ad : {1.0, 500.0, 1000.0}) {
            r.require(plg::check_integrity(1.6, p, ad) == IntegrityStatus::Ok,
                      "(1.6, " + num(p, 1) + ", " + num(ad, 0) + ")");
        }
    }
    if (r.pass) r.detail = "3 literal cases";
    return r;
}

Outcome locomotion_reproduction(const plgsim::RunConfig& cfg, const plg::RobotRun& prepared) {
    Outcome r;
    const auto& robot = cfg.robot;
    const auto cal = plg::calibrate_friction_ratio(robot.body, robot.friction, prepared.drive, robot.locomotion_dt,
                                                   prepared.period, 4.03);
    r.require(std::abs(cal.friction.ratio() - robot.friction.ratio()) <= 0.01 * robot.friction.ratio(),
              "calibrated ratio " + num(cal.friction.ratio()) + " differs from shipped " +
                  num(robot.friction.ratio()));
    const auto run = plg::run_robot(robot);
    const double v = std::abs(run.metrics.mean_velocity);
    const double bl = std::abs(run.metrics.body_lengths_per_second);
    r.require(std::abs(v - 4.03) <= 0.2, "velocity " + num(v) + " mm/s");
    r.require(std::abs(bl - 0.0153) <= 0.001, "BL/s " + num(bl, 5));
    if (r.pass) {
        r.detail = "ratio " + num(cal.friction.ratio()) + ", " + num(v) + " mm/s, " + num(bl, 5) + " BL/s";
    }
    return r;
}

Outcome locomotion_properties(const plgsim::RunConfig& cfg, const plg::RobotRun& prepared) {
    Outcome r;
    const auto t0 = Clock::now();
    const plg::BodyConfig& body = cfg.robot.body;
    const plg::SegmentDrive& drive = prepared.drive;
    const double dt = cfg.robot.locomotion_dt;
    const double period = prepared.period;

    // Zero drive: segments held at rest length.
    {
        plg::SegmentDrive rest = drive;
        for (auto& c : rest.commanded) std::fill(c.begin(), c.end(), body.rest_length);
        const auto g = plg::simulate_locomotion(body, cfg.robot.friction, rest, dt);
        double worst = 0.0;
        for (const auto& foot : g.feet) worst = std::max(worst, std::abs(foot.back() - foot.front()));
        r.require(worst < 1e-9, "zero drive moved " + num(worst, 9) + " mm");
    }

    std::vector<double> peaks;
    for (const auto& c : drive.commanded) peaks.push_back(*std::max_element(c.begin(), c.end()) - body.rest_length);
    const double bound = oracle::perfect_anchor_stride(peaks);

    // Stride bound and monotonicity over the friction ratio.
    double prev_v = -1e9;
    std::string velocities;
    for (double ratio : {1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
        for (bool mirror : {false, true}) {
            plg::FrictionModel f = cfg.robot.friction.with_ratio(ratio);
            if (mirror) f = f.mirrored();
            const auto m = plg::gait_metrics(plg::simulate_locomotion(body, f, drive, dt), period, body);
            r.require(std::abs(m.stride_per_cycle) <= bound * (1.0 + 1e-9),
                      "stride " + num(m.stride_per_cycle) + " exceeds " + num(bound) + " at ratio " + num(ratio, 1));
            if (!mirror) {
                r.require(m.mean_velocity >= prev_v - 1e-6, "velocity not monotone at ratio " + num(ratio, 1));
                prev_v = m.mean_velocity;
                velocities += (velocities.empty() ? "" : " ") + num(m.mean_velocity, 2);
            }
        }
    }

    // Reflection: mirrored friction and reversed drive negate each foot's path.
    {
        const auto a = plg::simulate_locomotion(body, cfg.robot.friction, drive, dt);
        const auto b = plg::simulate_locomotion(body, cfg.robot.friction.mirrored(), drive.reversed(), dt);
        const std::size_t n = a.feet.size() - 1;
        double worst = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            for (std::size_t k = 0; k < a.times.size(); ++k) {
                const double da = a.feet[j][k] - a.feet[j][0];
                const double db = b.feet[n - j][k] - b.feet[n - j][0];
                worst = std::max(worst, std::abs(da + db));
            }
        }
        r.require(worst < 1e-6, "reflection mismatch " + num(worst, 9) + " mm");
    }

    // Frictionless: no external force, so the centre of mass stays put.
    {
        plg::FrictionModel f = cfg.robot.friction;
        f.mu_forward = f.mu_backward = 0.0;
        const auto g = plg::simulate_locomotion(body, f, drive, dt);
        double worst = 0.0;
        const double n = static_cast<double>(g.feet.size());
        double c0 = 0.0;
        for (const auto& foot : g.feet) c0 += foot[0] / n;
        for (std::size_t k = 0; k < g.times.size(); ++k) {
            double c = 0.0;
            for (const auto& foot : g.feet) c += foot[k] / n;
            worst = std::max(worst, std::abs(c - c0));
        }
        r.require(worst < 1e-6, "centre of mass drifted " + num(worst, 9) + " mm");
    }

    // Step halving.
    {
        const double v1 = plg::gait_metrics(plg::simulate_locomotion(body, cfg.robot.friction, drive, dt), period,
                                            body)
                              .mean_velocity;
        const double v2 = plg::gait_metrics(plg::simulate_locomotion(body, cfg.robot.friction, drive, dt / 2.0),
                                            period, body)
                              .mean_velocity;
        r.require(std::abs(v1 - v2) < 0.01 * std::abs(v2), "dt halving " + num(v1) + " vs " + num(v2));
    }

    const double runtime = seconds_since(t0);
    r.require(runtime < 60.0, "runtime " + num(runtime, 1) + " s");
    if (r.pass) {
        r.detail = "velocities over ratio 1..100: " + velocities + " mm/s; stride bound " + num(bound, 2) + " mm; " +
                   num(runtime, 1) + " s";
    }
    return r;
}

Outcome parser() {
    Outcome r;
    testing_util::NetlistGen gen(7u);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const plg::Netlist n = gen.next();
        const std::string text = plg::serialize_netlist(n);
        const plg::Netlist back = plg::parse_netlist(text);
        if (!(back == plg::canonical(n)) || plg::serialize_netlist(back) != text) {
            r.require(false, "round trip failed on case " + std::to_string(i));
            break;
        }
        ++checked;
    }
    const std::string golden = slurp(testing_util::fixture("ring4.plg"));
    r.require(plg::serialize_netlist(testing_util::ring(4)) == golden, "ring4.plg differs from serializer output");
    r.require(plg::serialize_netlist(plg::parse_netlist(golden)) == golden, "ring4.plg not a fixed point");
    if (r.pass) r.detail = std::to_string(checked) + " random netlists round-trip, golden file stable";
    return r;
}

Outcome determinism() {
    Outcome r;
    const fs::path base = fs::temp_directory_path() / "plgsim_acceptance";
    fs::remove_all(base);
    const std::string a = (base / "a").string();
    const std::string b = (base / "b").string();
    r.require(run_quiet({"simulate-robot", "--out", a}) == 0, "first run failed");
    r.require(run_quiet({"simulate-robot", "--out", b}) == 0, "second run failed");
    for (const char* f : {"pressure.csv", "gait.csv", "metrics.csv"}) {
        const std::string x = slurp((fs::path(a) / f).string());
        r.require(!x.empty() && x == slurp((fs::path(b) / f).string()), std::string(f) + " differs");
    }
    fs::remove_all(base);
    if (r.pass) r.detail = "pressure.csv, gait.csv, metrics.csv identical";
    return r;
}

}  // namespace

int main() {
    const plgsim::RunConfig cfg = plgsim::default_run_config();
    std::vector<std::pair<int, std::function<Outcome()>>> criteria;

    std::optional<plg::RobotRun> prepared;
    auto drive = [&]() -> const plg::RobotRun& {
        if (!prepared) prepared = plg::prepare_drive(cfg.robot);
        return *prepared;
    };

    criteria.emplace_back(1, truth_tables);
    criteria.emplace_back(2, [&] { return oscillator(cfg.robot.pneumo); });
    criteria.emplace_back(3, [&] { return period_scaling(cfg.robot.pneumo); });
    criteria.emplace_back(4, actuator_fit);
    criteria.emplace_back(5, fatigue);
    criteria.emplace_back(6, [&] { return locomotion_reproduction(cfg, drive()); });
    criteria.emplace_back(7, [&] { return locomotion_properties(cfg, drive()); });
    criteria.emplace_back(8, parser);
    criteria.emplace_back(9, determinism);

    int failures = 0;
    for (const auto& [id, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("criterion %d: %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
