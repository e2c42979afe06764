#pragma once

// Full robot run: netlist -> pressure trace -> bellow drive -> gait.

#include "plg/actuator.hpp"
#include "plg/circuit.hpp"
#include "plg/locomotion.hpp"
#include "plg/pneumo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plg {

struct RobotConfig {
    /// When unset, a ring of `n_modules` is built from the fields below.
    std::optional<Netlist> netlist;
    int n_modules = 4;
    double supply_pressure = 2.0;  // bar
    double tube_length = 140.0;    // mm
    double tube_inner_diameter = kDefaultTubeInnerDiameter;
    BellowSpec bellow;

    PneumoParams pneumo;
    std::vector<ElongationDataPoint> elongation_data = reference_elongation_points();
    double tau_release = 267.0;  // ms

    BodyConfig body;
    FrictionModel friction;
    double locomotion_dt = 0.001;  // s
    double duration = 60.0;        // s

    [[nodiscard]] Netlist resolved_netlist() const;
};

struct RobotRun {
    Netlist netlist;
    PressureTrace pressure;
    double period = 0.0;
    std::vector<ElongationModel> models;
    SegmentDrive drive;
    GaitTrace gait;
    GaitMetrics metrics;
};

/// Nominal per-cycle inflation of each bellow: half the predicted period, in ms.
double nominal_actuation_duration(const Netlist& netlist, const PneumoParams& params);

/// Bellows whose configured thickness, supply pressure and nominal inflation
/// time violate the fatigue rule, as "<module>: <reason>" strings.
std::vector<std::string> fatigue_violations(const RobotConfig& config);

/// Segments follow modules in natural id order, segment 0 at the tail.
/// Fits only the elongation groups matching the bellow thickness.
/// Throws whatever the stages throw; the period is measured on the first
/// module after 1.5 predicted periods.
RobotRun run_robot(const RobotConfig& config);

/// Pressure and drive for `config` (the steps of run_robot before gait
/// integration), for friction calibration.
RobotRun prepare_drive(const RobotConfig& config);

}  // namespace plg
