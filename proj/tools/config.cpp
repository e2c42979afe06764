#include "config.hpp"

#include "plg/error.hpp"
#include "plg/netlist_dsl.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace plgsim {

namespace {

double to_double(const std::string& key, const std::string& v) {
    double d = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (v.empty() || ec != std::errc{} || p != v.data() + v.size()) {
        throw plg::InvalidArgument(key + ": not a number: '" + v + "'");
    }
    return d;
}

long to_int(const std::string& key, const std::string& v) {
    long i = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
    if (v.empty() || ec != std::errc{} || p != v.data() + v.size()) {
        throw plg::InvalidArgument(key + ": not an integer: '" + v + "'");
    }
    return i;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw plg::InvalidArgument(key + ": expected true or false, got '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string num(double v) { return plg::format_number(v); }

struct Key {
    const char* name;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define PLG_DOUBLE(key, field)                                                                       \
    Key {                                                                                            \
        key, [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_double(k, v); }, \
            [](const RunConfig& c) { return num(c.field); }                                          \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> k = {
        {"circuit.netlist", [](RunConfig& c, const std::string&, const std::string& v) { c.netlist_path = v; },
         [](const RunConfig& c) { return c.netlist_path; }},
        {"circuit.n_modules",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.robot.n_modules = static_cast<int>(to_int(k, v));
         },
         [](const RunConfig& c) { return std::to_string(c.robot.n_modules); }},
        PLG_DOUBLE("circuit.supply_pressure", robot.supply_pressure),
        PLG_DOUBLE("circuit.tube_length", robot.tube_length),
        PLG_DOUBLE("circuit.tube_inner_diameter", robot.tube_inner_diameter),
        PLG_DOUBLE("pneumo.tau_fill", robot.pneumo.tau_fill),
        PLG_DOUBLE("pneumo.tau_vent", robot.pneumo.tau_vent),
        PLG_DOUBLE("pneumo.p_threshold_on", robot.pneumo.p_threshold_on),
        PLG_DOUBLE("pneumo.p_threshold_off", robot.pneumo.p_threshold_off),
        PLG_DOUBLE("pneumo.output_ratio_default", robot.pneumo.output_ratio_default),
        PLG_DOUBLE("pneumo.dt", robot.pneumo.dt),
        {"pneumo.contention_grace_steps",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.robot.pneumo.contention_grace_steps = static_cast<int>(to_int(k, v));
         },
         [](const RunConfig& c) { return std::to_string(c.robot.pneumo.contention_grace_steps); }},
        PLG_DOUBLE("pneumo.tube_ref_length", robot.pneumo.tube_ref_length),
        PLG_DOUBLE("pneumo.tube_ref_diameter", robot.pneumo.tube_ref_diameter),
        {"actuator.data", [](RunConfig& c, const std::string&, const std::string& v) { c.actuator_data_path = v; },
         [](const RunConfig& c) { return c.actuator_data_path; }},
        PLG_DOUBLE("actuator.wall_thickness", robot.bellow.wall_thickness),
        PLG_DOUBLE("actuator.tau_release_ms", robot.tau_release),
        {"body.n_segments",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.robot.body.n_segments = static_cast<int>(to_int(k, v));
         },
         [](const RunConfig& c) { return std::to_string(c.robot.body.n_segments); }},
        PLG_DOUBLE("body.rest_length", robot.body.rest_length),
        {"body.foot_mass_g",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.robot.body.foot_mass = to_double(k, v) / 1000.0;
         },
         // Rounded to micrograms so that 0.0382 kg prints as 38.2.
         [](const RunConfig& c) { return num(std::round(c.robot.body.foot_mass * 1e9) / 1e6); }},
        PLG_DOUBLE("body.stiffness", robot.body.stiffness),
        PLG_DOUBLE("body.damping", robot.body.damping),
        {"body.head_at_last_foot",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.robot.body.head_at_last_foot = to_bool(k, v);
         },
         [](const RunConfig& c) { return std::string(c.robot.body.head_at_last_foot ? "true" : "false"); }},
        PLG_DOUBLE("friction.mu_forward", robot.friction.mu_forward),
        PLG_DOUBLE("friction.mu_backward", robot.friction.mu_backward),
        PLG_DOUBLE("friction.v_smoothing", robot.friction.v_smoothing),
        PLG_DOUBLE("friction.gravity", robot.friction.gravity),
        PLG_DOUBLE("run.duration", robot.duration),
        PLG_DOUBLE("run.dt", robot.locomotion_dt),
        {"run.seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.seed = static_cast<std::uint64_t>(to_int(k, v));
         },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
    };
    return k;
}

#undef PLG_DOUBLE

}  // namespace

RunConfig default_run_config() {
    RunConfig c;
    // Ring period 5.98 s (calibrate --period 5.98 --modules 4).
    c.robot.pneumo.tau_fill = 1.3039;
    c.robot.pneumo.tau_vent = 0.32296;
    // Mean velocity 4.03 mm/s (calibrate-friction --target 4.03).
    c.robot.friction.mu_backward = 0.9;
    return c;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    for (const auto& k : keys()) {
        if (key == k.name) {
            k.set(config, key, value);
            return;
        }
    }
    throw plg::InvalidArgument("unknown config key '" + key + "'");
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw plg::InvalidArgument(origin + ":" + std::to_string(n) + ": expected key=value");
        }
        try {
            apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const plg::Error& e) {
            throw plg::InvalidArgument(origin + ":" + std::to_string(n) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw plg::IoError("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str(), path);
}

void resolve_paths(RunConfig& config) {
    if (!config.netlist_path.empty()) config.robot.netlist = plg::read_netlist_file(config.netlist_path);
    if (!config.actuator_data_path.empty()) {
        config.robot.elongation_data = plg::read_elongation_csv(config.actuator_data_path);
    }
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : keys()) out.emplace_back(k.name, k.get(config));
    return out;
}

}  // namespace plgsim
