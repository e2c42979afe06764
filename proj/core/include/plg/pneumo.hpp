#pragma once

// Continuous-time pressure model of PLG netlists. Each net is a first-order
// node: it fills toward output_ratio x supply while an open valve path
// reaches a supply and vents toward 0 while one reaches the exhaust. Valves
// switch on their control-node pressure with hysteresis.

#include "plg/circuit.hpp"
#include "plg/logic.hpp"

#include <string>
#include <vector>

namespace plg {

struct PneumoParams {
    double tau_fill = 1.078;          // s
    double tau_vent = 0.267;          // s, ~95% vented within the 800 ms release time
    double p_threshold_on = 1.0;      // bar gauge
    double p_threshold_off = 0.8;     // bar gauge
    double output_ratio_default = kDefaultOutputRatio;
    double dt = 0.001;                // s
    int contention_grace_steps = 5;
    // Tube time-constant scaling is relative to this reference tube:
    // tau * (length / ref_length) * (ref_diameter / diameter)^4.
    double tube_ref_length = 140.0;   // mm
    double tube_ref_diameter = kDefaultTubeInnerDiameter;  // mm

    /// Throws InvalidArgument on a violated invariant. `max_supply` <= 0
    /// skips the supply-relative threshold check.
    void check(double max_supply = 0.0) const;

    /// Both time constants multiplied by k.
    [[nodiscard]] PneumoParams scaled(double k) const;

    bool operator==(const PneumoParams&) const = default;
};

/// Uniformly sampled pressures (bar gauge) of each module's output node.
struct PressureTrace {
    double dt = 0.0;
    std::vector<std::string> nodes;
    std::vector<double> times;
    std::vector<std::vector<double>> pressure;  // [node][sample]

    [[nodiscard]] int index_of(const std::string& node) const;
    [[nodiscard]] const std::vector<double>& series(const std::string& node) const;
};

/// Explicit fixed-step run from 0 bar everywhere. Throws InvalidNetlist,
/// InvalidArgument, or ContentionDetected when a node stays joined to both
/// a supply and the exhaust for longer than the grace interval.
PressureTrace simulate_pressure(const Netlist& netlist, const PneumoParams& params, double duration);

/// Time for a first-order fill from 0 to cross the switching threshold:
/// tau_fill * ln(p_eff / (p_eff - p_on)). Throws ThresholdUnreachable when
/// p_on >= p_eff.
double stage_delay(double tau_fill, double p_supply_effective, double p_threshold_on);

/// Time for a vent from p_start to drop below p_off: tau_vent * ln(p_start / p_off).
double vent_delay(double tau_vent, double p_start, double p_threshold_off);

/// Per-module rise/fall delays implied by the first-order model, for
/// cross-checking the pressure run against the event simulator.
DelayModel delays_from_params(const Netlist& netlist, const PneumoParams& params);

/// Per-module rise/fall delays observed in a digitized run: for every output
/// edge after `settle`, the time since the latest edge on any module driving
/// one of its inputs, averaged. Modules without such edges keep the
/// first-order values from delays_from_params.
DelayModel measured_delays(const Netlist& netlist, const PneumoParams& params, const LogicTrace& digitized,
                           double settle);

/// Schmitt-trigger thresholding of every node; one row per change.
LogicTrace digitize(const PressureTrace& trace, const PneumoParams& params);

/// Simulates the netlist long enough for several cycles and returns the
/// digitized period of `node` (the first module when empty).
double simulated_period(const Netlist& netlist, const PneumoParams& params, const std::string& node = {});

struct CalibrationOptions {
    double supply_pressure = 2.0;  // bar
    double tube_length = 140.0;    // mm
    double multiplier_min = 0.02;
    double multiplier_max = 50.0;
    double rel_tolerance = 1e-4;
    int max_iterations = 80;
};

struct CalibrationResult {
    PneumoParams params;
    double multiplier = 1.0;
    double achieved_period = 0.0;
    int iterations = 0;
};

/// Bisection on a common multiplier of tau_fill and tau_vent so that the
/// n-module ring oscillator reproduces `target_period`. Throws
/// InvalidArgument or CalibrationFailed.
CalibrationResult calibrate(double target_period, int n_modules, const PneumoParams& params_template,
                            const CalibrationOptions& options = {});

}  // namespace plg
