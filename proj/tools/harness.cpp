#include "harness.hpp"

#include "config.hpp"
#include "svg_plot.hpp"

#include "plg/actuator.hpp"
#include "plg/logic.hpp"
#include "plg/netlist_dsl.hpp"
#include "plg/pipeline.hpp"
#include "plg/pneumo.hpp"
#include "plg/trace_io.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>

namespace plgsim {

namespace fs = std::filesystem;

int exit_code_for(plg::Errc code) noexcept {
    switch (code) {
    case plg::Errc::InvalidArgument:
    case plg::Errc::Parse:
    case plg::Errc::Io:
        return kExitUsage;
    case plg::Errc::InvalidNetlist:
    case plg::Errc::IncompleteWiring:
    case plg::Errc::CombinationalLoop:
        return kExitValidation;
    default:
        return kExitSimulation;
    }
}

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir = ".";

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file applied over the built-in defaults");
        cmd->add_option("--set", sets, "override one key, e.g. --set pneumo.dt=0.0005");
        cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    }

    RunConfig load() const {
        RunConfig c = default_run_config();
        if (!config_path.empty()) apply_config_file(c, config_path);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw plg::InvalidArgument("--set expects key=value, got '" + s + "'");
            apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
        }
        return c;
    }

    std::string path(const std::string& name) const {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw plg::IoError("cannot create " + out_dir + ": " + ec.message());
        return (fs::path(out_dir) / name).string();
    }
};

void print_report(const plg::ValidationReport& r, std::ostream& err) {
    for (const auto& d : r.errors) err << "error " << d.code << " at " << d.location << ": " << d.message << '\n';
    for (const auto& d : r.warnings) err << "warning " << d.code << " at " << d.location << ": " << d.message << '\n';
}

// Returns false (after printing) when the netlist has errors.
bool check_netlist(const plg::Netlist& net, std::ostream& err) {
    const auto report = plg::validate(net);
    print_report(report, err);
    return report.ok();
}

int cmd_truth_table(const std::string& gate, std::ostream& out, std::ostream& err) {
    plg::GateKind kind;
    if (gate == "inverter") {
        kind = plg::GateKind::inverter();
    } else if (gate == "buffer") {
        kind = plg::GateKind::buffer();
    } else if (fs::is_regular_file(gate)) {
        const plg::Netlist net = plg::canonical(plg::read_netlist_file(gate));
        if (net.modules.empty()) {
            err << "plgsim: " << gate << " declares no modules\n";
            return kExitUsage;
        }
        const auto it = std::find_if(net.modules.begin(), net.modules.end(),
                                     [](const auto& m) { return m.gate.type == plg::GateType::Generic; });
        const auto& m = it != net.modules.end() ? *it : net.modules.front();
        out << "# " << m.id << '\n';
        kind = m.gate;
    } else {
        err << "plgsim: unknown gate '" << gate << "' (expected inverter, buffer or a .plg file)\n";
        return kExitUsage;
    }
    out << plg::truth_table(kind).format();
    return kExitOk;
}

int cmd_simulate_circuit(const Common& common, const std::string& netlist_path, double duration, bool logic_csv,
                         std::ostream& out, std::ostream& err) {
    RunConfig cfg = common.load();
    if (!netlist_path.empty()) cfg.netlist_path = netlist_path;
    resolve_paths(cfg);
    const plg::Netlist net = cfg.robot.resolved_netlist();
    if (!check_netlist(net, err)) return kExitValidation;
    const auto& params = cfg.robot.pneumo;
    const plg::PressureTrace trace = plg::simulate_pressure(net, params, duration);
    plg::write_file(common.path("pressure.csv"), [&](std::ostream& o) { plg::write_pressure_csv(o, trace); });
    const plg::LogicTrace digital = plg::digitize(trace, params);
    if (logic_csv) {
        plg::write_file(common.path("logic.csv"), [&](std::ostream& o) { plg::write_logic_csv(o, digital); });
    }
    double estimate = 0.0;
    for (const auto& [id, d] : plg::delays_from_params(net, params).per_module) estimate += d.rise + d.fall;
    const double settle = std::min(1.5 * estimate, 0.25 * duration);
    const double period = plg::measure_period(digital, trace.nodes.front(), settle);
    out << "period: " << fmt("%.4f", period) << " s (" << fmt("%.4f", 1.0 / period) << " Hz)\n";
    out << "edge order:";
    for (const auto& id : plg::cyclic_edge_order(digital, settle)) out << ' ' << id;
    out << '\n';
    return kExitOk;
}

int cmd_fit_actuator(const Common& common, const std::string& csv, std::ostream& out, std::ostream&) {
    const auto points = plg::read_elongation_csv(csv);
    std::vector<plg::ElongationModel> models;
    for (const auto& group : plg::group_by_condition(points)) {
        const auto m = plg::fit_elongation(group);
        models.push_back(m);
        out << "pressure " << fmt("%.2f", m.pressure) << " bar, thickness " << fmt("%.2f", m.wall_thickness)
            << " mm: x_sat " << fmt("%.4f", m.x_sat) << " mm, amplitude " << fmt("%.4f", m.amplitude) << " mm, tau "
            << fmt("%.3f", m.tau) << " ms, rmse " << fmt("%.4f", m.fit_rmse) << " mm\n";
    }
    plg::write_file(common.path("fit.csv"), [&](std::ostream& o) { plg::write_fit_csv(o, models); });
    return kExitOk;
}

void write_plots(const Common& common, const plg::RobotRun& run) {
    std::vector<Series> head{{"head", run.gait.head}};
    plg::write_text_file(common.path("displacement.svg"),
                         line_chart_svg("Head displacement", "time (s)", "position (mm)", run.gait.times, head));
    std::vector<Series> p;
    for (std::size_t i = 0; i < run.pressure.nodes.size(); ++i) p.push_back({run.pressure.nodes[i], run.pressure.pressure[i]});
    plg::write_text_file(common.path("pressure.svg"),
                         line_chart_svg("Module output pressure", "time (s)", "pressure (bar)", run.pressure.times, p));
}

int cmd_simulate_robot(const Common& common, double duration, bool plot, std::ostream& out, std::ostream& err) {
    RunConfig cfg = common.load();
    if (duration >= 0.0) cfg.robot.duration = duration;
    if (!(cfg.robot.duration > 0.0)) throw plg::InvalidArgument("duration must be positive");
    resolve_paths(cfg);
    if (!check_netlist(cfg.robot.resolved_netlist(), err)) return kExitValidation;
    const auto fatigue = plg::fatigue_violations(cfg.robot);
    if (!fatigue.empty()) {
        for (const auto& f : fatigue) err << "fatigue failure: " << f << '\n';
        return kExitSimulation;
    }
    const plg::RobotRun run = plg::run_robot(cfg.robot);
    plg::write_file(common.path("pressure.csv"), [&](std::ostream& o) { plg::write_pressure_csv(o, run.pressure); });
    plg::write_file(common.path("gait.csv"), [&](std::ostream& o) { plg::write_gait_csv(o, run.gait); });
    const plg::RunMetrics metrics{run.period, run.metrics};
    plg::write_file(common.path("metrics.csv"), [&](std::ostream& o) { plg::write_metrics_csv(o, metrics); });
    if (plot) write_plots(common, run);
    out << "period: " << fmt("%.4f", run.period) << " s\n"
        << "mean velocity: " << fmt("%.4f", run.metrics.mean_velocity) << " mm/s\n"
        << "stride: " << fmt("%.4f", run.metrics.stride_per_cycle) << " mm/cycle\n"
        << "body lengths per second: " << fmt("%.5f", run.metrics.body_lengths_per_second) << '\n';
    return kExitOk;
}

int cmd_calibrate(const Common& common, double period, int modules, std::ostream& out, std::ostream&) {
    if (!(period > 0.0)) throw plg::InvalidArgument("--period must be positive");
    if (modules < 1) throw plg::InvalidArgument("--modules must be at least 1");
    const RunConfig cfg = common.load();
    plg::CalibrationOptions opt;
    opt.supply_pressure = cfg.robot.supply_pressure;
    opt.tube_length = cfg.robot.tube_length;
    // Only the tau_fill/tau_vent ratio of the template matters; the
    // multiplier absorbs their magnitude.
    const auto r = plg::calibrate(period, modules, cfg.robot.pneumo, opt);
    std::string text = "# calibrate --period " + plg::format_number(period) + " --modules " +
                       std::to_string(modules) + "\n" + "# multiplier " + fmt("%.6f", r.multiplier) +
                       ", achieved period " + fmt("%.6f", r.achieved_period) + " s\n" +
                       "pneumo.tau_fill=" + plg::format_number(r.params.tau_fill) + "\n" +
                       "pneumo.tau_vent=" + plg::format_number(r.params.tau_vent) + "\n";
    plg::write_text_file(common.path("params.calibrated"), text);
    out << "achieved period: " << fmt("%.4f", r.achieved_period) << " s\n"
        << "tau_fill: " << fmt("%.6f", r.params.tau_fill) << " s\n"
        << "tau_vent: " << fmt("%.6f", r.params.tau_vent) << " s\n";
    return kExitOk;
}

int cmd_calibrate_friction(const Common& common, double target, double rmin, double rmax, std::ostream& out,
                           std::ostream& err) {
    RunConfig cfg = common.load();
    resolve_paths(cfg);
    if (!check_netlist(cfg.robot.resolved_netlist(), err)) return kExitValidation;
    const plg::RobotRun run = plg::prepare_drive(cfg.robot);
    const auto r = plg::calibrate_friction_ratio(cfg.robot.body, cfg.robot.friction, run.drive,
                                                 cfg.robot.locomotion_dt, run.period, target, rmin, rmax);
    std::string text = "# calibrate-friction --target " + plg::format_number(target) + "\n# ratio " +
                       fmt("%.6f", r.friction.ratio()) + ", achieved " + fmt("%.6f", r.achieved_velocity) +
                       " mm/s\nfriction.mu_backward=" + plg::format_number(r.friction.mu_backward) + "\n";
    plg::write_text_file(common.path("friction.calibrated"), text);
    out << "friction ratio: " << fmt("%.6f", r.friction.ratio()) << '\n'
        << "mu_backward: " << fmt("%.6f", r.friction.mu_backward) << '\n'
        << "achieved velocity: " << fmt("%.4f", r.achieved_velocity) << " mm/s\n";
    return kExitOk;
}

int cmd_lint(const std::string& path, double spacing, std::ostream& out, std::ostream& err) {
    const plg::Netlist net = plg::read_netlist_file(path);
    const auto report = plg::validate(net);
    print_report(report, err);
    for (const auto& d : plg::lint(net, {spacing})) err << "lint " << d.code << " at " << d.location << ": " << d.message << '\n';
    out << (report.ok() ? "ok" : "invalid") << ": " << report.errors.size() << " error(s), "
        << report.warnings.size() << " warning(s)\n";
    return report.ok() ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulator for pneumatic-logic-gate earthworm robots", "plgsim"};
    app.require_subcommand(1);

    std::string gate;
    auto* tt = app.add_subcommand("truth-table", "print the truth table of a gate");
    tt->add_option("gate", gate, "inverter, buffer, or a .plg file whose first generic module is tabulated")->required();

    Common c_circ;
    std::string netlist;
    double circ_duration = 60.0;
    bool logic_csv = false;
    auto* circ = app.add_subcommand("simulate-circuit", "pressure simulation of a netlist; writes pressure.csv");
    c_circ.attach(circ);
    circ->add_option("--netlist", netlist, ".plg file (default: the configured ring)");
    circ->add_option("--duration", circ_duration, "simulated seconds")->capture_default_str();
    circ->add_flag("--logic", logic_csv, "also write the digitized trace to logic.csv");

    Common c_fit;
    std::string data;
    auto* fit = app.add_subcommand("fit-actuator", "fit elongation curves; writes fit.csv");
    c_fit.attach(fit);
    fit->add_option("data", data, "CSV: pressure_bar,thickness_mm,ad_ms,deformation_mm")->required();

    Common c_rob;
    double rob_duration = -1.0;
    bool plot = false;
    auto* rob = app.add_subcommand("simulate-robot", "full pipeline; writes pressure.csv, gait.csv, metrics.csv");
    c_rob.attach(rob);
    rob->add_option("--duration", rob_duration, "simulated seconds (default run.duration)");
    rob->add_flag("--plot", plot, "also write displacement.svg and pressure.svg");

    Common c_cal;
    double period = 0.0;
    int modules = 4;
    auto* cal = app.add_subcommand("calibrate", "fit the pneumatic time constants to a ring period");
    c_cal.attach(cal);
    cal->add_option("--period", period, "target period in seconds")->required();
    cal->add_option("--modules", modules, "ring size")->capture_default_str();

    Common c_fr;
    double target = 4.03, rmin = 1.0, rmax = 100.0;
    auto* fr = app.add_subcommand("calibrate-friction", "fit mu_backward/mu_forward to a mean velocity");
    c_fr.attach(fr);
    fr->add_option("--target", target, "mean velocity in mm/s")->capture_default_str();
    fr->add_option("--ratio-min", rmin, "lower bracket")->capture_default_str();
    fr->add_option("--ratio-max", rmax, "upper bracket")->capture_default_str();

    std::string lint_path;
    double spacing = 66.0;
    auto* li = app.add_subcommand("lint", "validate and lint a .plg file");
    li->add_option("netlist", lint_path, ".plg file")->required();
    li->add_option("--module-spacing", spacing, "minimum tube length in mm")->capture_default_str();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*tt) return cmd_truth_table(gate, out, err);
        if (*circ) return cmd_simulate_circuit(c_circ, netlist, circ_duration, logic_csv, out, err);
        if (*fit) return cmd_fit_actuator(c_fit, data, out, err);
        if (*rob) return cmd_simulate_robot(c_rob, rob_duration, plot, out, err);
        if (*cal) return cmd_calibrate(c_cal, period, modules, out, err);
        if (*fr) return cmd_calibrate_friction(c_fr, target, rmin, rmax, out, err);
        if (*li) return cmd_lint(lint_path, spacing, out, err);
    } catch (const plg::Error& e) {
        err << "plgsim: " << plg::to_string(e.code()) << ": " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "plgsim: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace plgsim
