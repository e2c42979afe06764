#include "plg/pipeline.hpp"

#include "plg/error.hpp"
#include "plg/logic.hpp"

#include <algorithm>
#include <sstream>

namespace plg {

Netlist RobotConfig::resolved_netlist() const {
    if (netlist) return *netlist;
    return build_ring_oscillator(n_modules, bellow, supply_pressure, tube_length, tube_inner_diameter);
}

namespace {

double predicted_period(const Netlist& netlist, const PneumoParams& params) {
    double p = 0.0;
    for (const auto& [id, d] : delays_from_params(netlist, params).per_module) p += d.rise + d.fall;
    return p;
}

std::vector<std::string> ids_in_order(const Netlist& netlist) {
    std::vector<std::string> ids;
    for (const auto& m : netlist.modules) ids.push_back(m.id);
    std::sort(ids.begin(), ids.end(), natural_less);
    return ids;
}

double max_supply(const Netlist& netlist) {
    double p = 0.0;
    for (const auto& s : netlist.supplies) p = std::max(p, s.pressure);
    return p;
}

}  // namespace

double nominal_actuation_duration(const Netlist& netlist, const PneumoParams& params) {
    return 500.0 * predicted_period(netlist, params);
}

std::vector<std::string> fatigue_violations(const RobotConfig& config) {
    const Netlist net = config.resolved_netlist();
    const double ad = nominal_actuation_duration(net, config.pneumo);
    const double p = max_supply(net);
    std::vector<std::string> out;
    for (const auto& id : ids_in_order(net)) {
        const ModuleSpec* m = net.find_module(id);
        const double t = m->bellow ? m->bellow->wall_thickness : config.bellow.wall_thickness;
        if (check_integrity(t, p, ad) == IntegrityStatus::FatigueFailure) {
            std::ostringstream os;
            os << id << ": " << t << " mm bellow at " << p << " bar inflated for " << ad << " ms per cycle";
            out.push_back(os.str());
        }
    }
    return out;
}

RobotRun prepare_drive(const RobotConfig& config) {
    if (!(config.duration > 0.0)) throw InvalidArgument("duration must be positive");
    RobotRun run;
    run.netlist = config.resolved_netlist();
    const auto ids = ids_in_order(run.netlist);
    if (static_cast<int>(ids.size()) != config.body.n_segments) {
        throw UnmappedSegment("body has " + std::to_string(config.body.n_segments) + " segments but the netlist has " +
                              std::to_string(ids.size()) + " modules");
    }

    run.pressure = simulate_pressure(run.netlist, config.pneumo, config.duration);
    const double estimate = predicted_period(run.netlist, config.pneumo);
    run.period = measure_period(digitize(run.pressure, config.pneumo), ids.front(), 1.5 * estimate);

    std::vector<ElongationDataPoint> pts;
    for (const auto& p : config.elongation_data) {
        if (p.wall_thickness == config.bellow.wall_thickness) pts.push_back(p);
    }
    if (pts.empty()) {
        throw Underdetermined("no elongation data for " + std::to_string(config.bellow.wall_thickness) +
                              " mm bellows");
    }
    for (const auto& g : group_by_condition(pts)) run.models.push_back(fit_elongation(g));
    run.drive = build_drive(run.pressure, ids, ElongationModelSet(run.models), config.body.rest_length,
                            config.tau_release, config.pneumo.p_threshold_on);
    return run;
}

RobotRun run_robot(const RobotConfig& config) {
    RobotRun run = prepare_drive(config);
    run.gait = simulate_locomotion(config.body, config.friction, run.drive, config.locomotion_dt);
    run.metrics = gait_metrics(run.gait, run.period, config.body);
    return run;
}

}  // namespace plg
