#include "plg/pneumo.hpp"

#include "plg/error.hpp"
#include "plg/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace plg {

void PneumoParams::check(double max_supply) const {
    if (!(tau_fill > 0.0) || !(tau_vent > 0.0) || !(dt > 0.0)) {
        throw InvalidArgument("tau_fill, tau_vent and dt must be positive");
    }
    if (!(p_threshold_off > 0.0) || !(p_threshold_off <= p_threshold_on)) {
        throw InvalidArgument("thresholds must satisfy 0 < off <= on");
    }
    if (max_supply > 0.0 && !(p_threshold_on < max_supply)) {
        throw InvalidArgument("switching threshold must lie below the supply pressure");
    }
    if (!(output_ratio_default > 0.0 && output_ratio_default <= 1.0)) {
        throw InvalidArgument("output ratio must lie in (0, 1]");
    }
    if (contention_grace_steps < 0) throw InvalidArgument("contention grace must be non-negative");
    if (!(tube_ref_length > 0.0) || !(tube_ref_diameter > 0.0)) {
        throw InvalidArgument("reference tube dimensions must be positive");
    }
}

PneumoParams PneumoParams::scaled(double k) const {
    PneumoParams p = *this;
    p.tau_fill *= k;
    p.tau_vent *= k;
    return p;
}

int PressureTrace::index_of(const std::string& node) const {
    const auto it = std::find(nodes.begin(), nodes.end(), node);
    return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

const std::vector<double>& PressureTrace::series(const std::string& node) const {
    const int i = index_of(node);
    if (i < 0) throw InvalidArgument("pressure trace has no node " + node);
    return pressure[i];
}

namespace {

std::vector<int> modules_by_id(const Netlist& netlist) {
    std::vector<int> order(netlist.modules.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return natural_less(netlist.modules[a].id, netlist.modules[b].id);
    });
    return order;
}

std::vector<double> tube_scales(const Netlist& netlist, const NetGraph& graph, const PneumoParams& params) {
    std::vector<double> scale(static_cast<std::size_t>(graph.net_count()), 1.0);
    for (int net = 0; net < graph.net_count(); ++net) {
        const auto& tubes = graph.tubes_on(net);
        if (tubes.empty()) continue;
        double sum = 0.0;
        for (int t : tubes) {
            const auto& tube = netlist.tubes[t];
            sum += (tube.length / params.tube_ref_length) * std::pow(params.tube_ref_diameter / tube.inner_diameter, 4);
        }
        scale[net] = sum / static_cast<double>(tubes.size());
    }
    return scale;
}

double output_ratio_of(const Netlist& netlist, const NetGraph& graph, int net, const PneumoParams& params) {
    const int driver = graph.driver_of(net);
    return driver >= 0 ? netlist.modules[driver].ratio_or(params.output_ratio_default)
                       : params.output_ratio_default;
}

}  // namespace

PressureTrace simulate_pressure(const Netlist& netlist, const PneumoParams& params, double duration) {
    const auto report = validate(netlist);
    if (!report.ok()) {
        const auto& e = report.errors.front();
        throw InvalidNetlist(e.code + " at " + e.location + ": " + e.message);
    }
    double max_supply = 0.0;
    for (const auto& s : netlist.supplies) max_supply = std::max(max_supply, s.pressure);
    params.check(max_supply);
    if (!(duration >= params.dt)) throw InvalidArgument("duration must be at least one time step");

    const NetGraph graph(netlist);
    const int n_nets = graph.net_count();
    const int exhaust = graph.exhaust_net();
    const auto scale = tube_scales(netlist, graph, params);

    std::vector<bool> fixed(static_cast<std::size_t>(n_nets), false);
    std::vector<double> p(static_cast<std::size_t>(n_nets), 0.0);
    std::vector<double> ratio(static_cast<std::size_t>(n_nets), params.output_ratio_default);
    std::vector<double> fill_gain(static_cast<std::size_t>(n_nets), 0.0);
    std::vector<double> vent_gain(static_cast<std::size_t>(n_nets), 0.0);
    fixed[exhaust] = true;
    for (int net = 0; net < n_nets; ++net) {
        if (graph.supply_pressure(net)) {
            fixed[net] = true;
            p[net] = *graph.supply_pressure(net);
        }
        if (fixed[net]) continue;
        ratio[net] = output_ratio_of(netlist, graph, net, params);
        const double tf = params.tau_fill * scale[net];
        const double tv = params.tau_vent * scale[net];
        if (!(params.dt < tf) || !(params.dt < tv)) {
            throw InvalidArgument("time step must be smaller than every node time constant");
        }
        fill_gain[net] = params.dt / tf;
        vent_gain[net] = params.dt / tv;
    }

    const auto& valves = graph.valves();
    std::vector<bool> control_high(valves.size(), false);

    const auto order = modules_by_id(netlist);
    PressureTrace trace;
    trace.dt = params.dt;
    for (int m : order) trace.nodes.push_back(netlist.modules[m].id);
    const auto steps = static_cast<std::size_t>(std::llround(duration / params.dt));
    trace.times.reserve(steps + 1);
    trace.pressure.assign(order.size(), {});
    for (auto& s : trace.pressure) s.reserve(steps + 1);

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_nets));
    std::vector<double> supply_reach(static_cast<std::size_t>(n_nets));
    std::vector<char> exhaust_reach(static_cast<std::size_t>(n_nets));
    std::vector<int> contention(static_cast<std::size_t>(n_nets), 0);
    std::vector<int> stack;

    for (std::size_t k = 0;; ++k) {
        trace.times.push_back(static_cast<double>(k) * params.dt);
        for (std::size_t i = 0; i < order.size(); ++i) trace.pressure[i].push_back(p[graph.output_net(order[i])]);
        if (k == steps) break;

        for (auto& a : adj) a.clear();
        for (std::size_t v = 0; v < valves.size(); ++v) {
            const double pc = p[valves[v].control];
            if (pc >= params.p_threshold_on) control_high[v] = true;
            if (pc < params.p_threshold_off) control_high[v] = false;
            const bool open = valves[v].kind == ValveKind::NormallyOpen ? !control_high[v] : control_high[v];
            if (open) {
                adj[valves[v].in].push_back(valves[v].out);
                adj[valves[v].out].push_back(valves[v].in);
            }
        }

        // Paths run through free nets only; fixed nets are terminals.
        std::fill(supply_reach.begin(), supply_reach.end(), 0.0);
        std::fill(exhaust_reach.begin(), exhaust_reach.end(), 0);
        for (int src = 0; src < n_nets; ++src) {
            if (!fixed[src] || src == exhaust) continue;
            const double ps = p[src];
            stack.assign(1, src);
            std::vector<char> seen(static_cast<std::size_t>(n_nets), 0);
            seen[src] = 1;
            while (!stack.empty()) {
                const int c = stack.back();
                stack.pop_back();
                for (int nxt : adj[c]) {
                    if (seen[nxt]) continue;
                    seen[nxt] = 1;
                    supply_reach[nxt] = std::max(supply_reach[nxt], ps);
                    if (!fixed[nxt]) stack.push_back(nxt);
                }
            }
        }
        stack.assign(1, exhaust);
        exhaust_reach[exhaust] = 1;
        while (!stack.empty()) {
            const int c = stack.back();
            stack.pop_back();
            for (int nxt : adj[c]) {
                if (exhaust_reach[nxt]) continue;
                exhaust_reach[nxt] = 1;
                if (!fixed[nxt]) stack.push_back(nxt);
            }
        }

        for (int net = 0; net < n_nets; ++net) {
            const bool from_supply = supply_reach[net] > 0.0;
            const bool to_exhaust = exhaust_reach[net] != 0 && net != exhaust;
            const bool contended = net == exhaust ? from_supply : (!fixed[net] && from_supply && to_exhaust);
            if (contended) {
                if (++contention[net] > params.contention_grace_steps) {
                    std::ostringstream os;
                    os << "node " << graph.name(net) << " joined to supply and exhaust for "
                       << contention[net] << " steps at t=" << static_cast<double>(k) * params.dt << " s";
                    throw ContentionDetected(os.str());
                }
                continue;
            }
            contention[net] = 0;
            if (fixed[net]) continue;
            if (from_supply) {
                p[net] += fill_gain[net] * (ratio[net] * supply_reach[net] - p[net]);
            } else if (to_exhaust) {
                p[net] -= vent_gain[net] * p[net];
            }
        }
    }
    return trace;
}

double stage_delay(double tau_fill, double p_supply_effective, double p_threshold_on) {
    if (!(tau_fill > 0.0) || !(p_threshold_on > 0.0)) {
        throw InvalidArgument("stage_delay needs positive tau and threshold");
    }
    if (!(p_threshold_on < p_supply_effective)) {
        throw ThresholdUnreachable("threshold " + std::to_string(p_threshold_on) +
                                   " bar is never reached by a fill toward " +
                                   std::to_string(p_supply_effective) + " bar");
    }
    return tau_fill * std::log(p_supply_effective / (p_supply_effective - p_threshold_on));
}

double vent_delay(double tau_vent, double p_start, double p_threshold_off) {
    if (!(tau_vent > 0.0) || !(p_threshold_off > 0.0)) {
        throw InvalidArgument("vent_delay needs positive tau and threshold");
    }
    if (p_start <= p_threshold_off) return 0.0;
    return tau_vent * std::log(p_start / p_threshold_off);
}

DelayModel delays_from_params(const Netlist& netlist, const PneumoParams& params) {
    const NetGraph graph(netlist);
    const auto scale = tube_scales(netlist, graph, params);
    DelayModel model;
    bool first = true;
    for (int m = 0; m < graph.module_count(); ++m) {
        const int sup_net = graph.net_of(m, SocketId::SpIn);
        const double supply = graph.supply_pressure(sup_net).value_or(0.0);
        const int out = graph.output_net(m);
        const double plateau = netlist.modules[m].ratio_or(params.output_ratio_default) * supply;
        StageDelay d;
        d.rise = stage_delay(params.tau_fill * scale[out], plateau, params.p_threshold_on);
        d.fall = vent_delay(params.tau_vent * scale[out], plateau, params.p_threshold_off);
        model.per_module[netlist.modules[m].id] = d;
        if (first) {
            model.uniform = d;
            first = false;
        }
    }
    return model;
}

DelayModel measured_delays(const Netlist& netlist, const PneumoParams& params, const LogicTrace& trace,
                           double settle) {
    DelayModel model = delays_from_params(netlist, params);
    const NetGraph graph(netlist);
    // Rows where a node changes level, per node.
    auto edges = [&](int node) {
        std::vector<std::pair<double, LogicLevel>> out;
        const auto& lv = trace.levels[node];
        for (std::size_t r = 1; r < lv.size(); ++r) {
            if (lv[r] != lv[r - 1]) out.emplace_back(trace.times[r], lv[r]);
        }
        return out;
    };
    for (int m = 0; m < graph.module_count(); ++m) {
        const std::string& id = graph.module_id(m);
        const int node = trace.index_of(id);
        if (node < 0) continue;
        std::vector<double> drivers;
        for (int net : graph.input_nets(m)) {
            const int d = graph.driver_of(net);
            if (d < 0) continue;
            const int dn = trace.index_of(graph.module_id(d));
            if (dn < 0) continue;
            for (const auto& [t, l] : edges(dn)) drivers.push_back(t);
        }
        std::sort(drivers.begin(), drivers.end());
        double rise = 0.0, fall = 0.0;
        int n_rise = 0, n_fall = 0;
        for (const auto& [t, level] : edges(node)) {
            if (t < settle) continue;
            const auto it = std::lower_bound(drivers.begin(), drivers.end(), t);
            if (it == drivers.begin()) continue;
            const double delay = t - *(it - 1);
            if (level == LogicLevel::High) {
                rise += delay;
                ++n_rise;
            } else if (level == LogicLevel::Low) {
                fall += delay;
                ++n_fall;
            }
        }
        if (n_rise == 0 || n_fall == 0) continue;
        model.per_module[id] = StageDelay{rise / n_rise, fall / n_fall};
    }
    return model;
}

LogicTrace digitize(const PressureTrace& trace, const PneumoParams& params) {
    LogicTrace out;
    out.nodes = trace.nodes;
    out.levels.resize(trace.nodes.size());
    if (trace.times.empty()) return out;
    std::vector<LogicLevel> state(trace.nodes.size());
    for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
        state[i] = trace.pressure[i][0] >= params.p_threshold_on ? LogicLevel::High : LogicLevel::Low;
    }
    auto record = [&](double t) {
        out.times.push_back(t);
        for (std::size_t i = 0; i < state.size(); ++i) out.levels[i].push_back(state[i]);
    };
    record(trace.times[0]);
    for (std::size_t k = 1; k < trace.times.size(); ++k) {
        bool changed = false;
        for (std::size_t i = 0; i < state.size(); ++i) {
            const double pk = trace.pressure[i][k];
            if (state[i] == LogicLevel::Low && pk >= params.p_threshold_on) {
                state[i] = LogicLevel::High;
                changed = true;
            } else if (state[i] == LogicLevel::High && pk < params.p_threshold_off) {
                state[i] = LogicLevel::Low;
                changed = true;
            }
        }
        if (changed) record(trace.times[k]);
    }
    return out;
}

double simulated_period(const Netlist& netlist, const PneumoParams& params, const std::string& node) {
    const DelayModel d = delays_from_params(netlist, params);
    double estimate = 0.0;
    for (const auto& [id, s] : d.per_module) estimate += s.rise + s.fall;
    const double settle = 1.5 * estimate;
    const PressureTrace trace = simulate_pressure(netlist, params, settle + 4.5 * estimate);
    const std::string target = node.empty() ? trace.nodes.front() : node;
    return measure_period(digitize(trace, params), target, settle);
}

CalibrationResult calibrate(double target_period, int n_modules, const PneumoParams& tmpl,
                            const CalibrationOptions& options) {
    if (!(target_period > 0.0)) throw InvalidArgument("target period must be positive");
    if (n_modules < 1) throw InvalidArgument("calibration needs at least one module");
    const Netlist ring = build_ring_oscillator(n_modules, BellowSpec{}, options.supply_pressure,
                                               options.tube_length, tmpl.tube_ref_diameter);
    CalibrationResult result;
    auto period_at = [&](double k) {
        ++result.iterations;
        return simulated_period(ring, tmpl.scaled(k));
    };

    // The period is close to linear in the multiplier; start the bracket
    // around the analytic guess and widen it geometrically.
    const DelayModel d = delays_from_params(ring, tmpl);
    double estimate = 0.0;
    for (const auto& [id, s] : d.per_module) estimate += s.rise + s.fall;
    const double guess = std::clamp(target_period / estimate, options.multiplier_min, options.multiplier_max);
    double lo = std::max(options.multiplier_min, guess / 1.25);
    double hi = std::min(options.multiplier_max, guess * 1.25);
    double f_lo = period_at(lo);
    double f_hi = period_at(hi);
    while (f_lo > target_period && lo > options.multiplier_min) {
        hi = lo;
        f_hi = f_lo;
        lo = std::max(options.multiplier_min, lo / 2.0);
        f_lo = period_at(lo);
    }
    while (f_hi < target_period && hi < options.multiplier_max) {
        lo = hi;
        f_lo = f_hi;
        hi = std::min(options.multiplier_max, hi * 2.0);
        f_hi = period_at(hi);
    }
    if (!(f_lo <= target_period && target_period <= f_hi)) {
        throw CalibrationFailed("no multiplier in [" + std::to_string(options.multiplier_min) + ", " +
                                std::to_string(options.multiplier_max) + "] brackets period " +
                                std::to_string(target_period) + " s");
    }

    double mid = 0.5 * (lo + hi);
    double f_mid = 0.0;
    for (int i = 0; i < options.max_iterations; ++i) {
        mid = 0.5 * (lo + hi);
        f_mid = period_at(mid);
        if (std::abs(f_mid - target_period) <= options.rel_tolerance * target_period) break;
        if (f_mid < target_period) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-12 * hi) break;
    }
    result.multiplier = mid;
    result.params = tmpl.scaled(mid);
    result.achieved_period = f_mid;
    if (std::abs(f_mid - target_period) > 0.01 * target_period) {
        throw CalibrationFailed("bisection stalled at period " + std::to_string(f_mid) + " s");
    }
    return result;
}

}  // namespace plg
