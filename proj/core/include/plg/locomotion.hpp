#pragma once

#include "plg/actuator.hpp"
#include "plg/pneumo.hpp"

#include <string>
#include <vector>

namespace plg {

// Units throughout: mm, s, kg, N.

struct FrictionModel {
    double mu_forward = 0.3;
    double mu_backward = 3.0;
    double v_smoothing = 0.1;  // mm/s
    double gravity = 9810.0;   // mm/s^2

    /// Throws InvalidArgument. Zero coefficients are accepted so that the
    /// frictionless limit can be exercised.
    void check() const;
    [[nodiscard]] double ratio() const { return mu_backward / mu_forward; }
    [[nodiscard]] FrictionModel with_ratio(double r) const;
    [[nodiscard]] FrictionModel mirrored() const;

    bool operator==(const FrictionModel&) const = default;
};

struct BodyConfig {
    int n_segments = 4;
    double rest_length = 263.0 / 4.0;  // mm
    double foot_mass = 0.0382;         // kg, 191 g over n_segments + 1 feet
    double stiffness = 0.5;            // N/mm
    double damping = 0.05;             // N s/mm
    bool head_at_last_foot = true;

    void check() const;
    [[nodiscard]] double total_rest_length() const { return rest_length * n_segments; }

    bool operator==(const BodyConfig&) const = default;
};

/// Commanded segment lengths on a uniform grid.
struct SegmentDrive {
    double dt = 0.0;
    std::vector<std::vector<double>> commanded;  // [segment][sample]

    [[nodiscard]] std::size_t samples() const { return commanded.empty() ? 0 : commanded.front().size(); }
    /// Same drive with segment order reversed.
    [[nodiscard]] SegmentDrive reversed() const;
};

/// Segment i follows trace node segment_nodes[i]. Throws UnmappedSegment
/// when an entry is empty or names a node absent from the trace.
SegmentDrive build_drive(const PressureTrace& trace, const std::vector<std::string>& segment_nodes,
                         const ElongationModelSet& models, double rest_length, double tau_release_ms,
                         double threshold_bar);

struct GaitTrace {
    std::vector<double> times;
    std::vector<std::vector<double>> feet;  // [foot][sample], foot 0 at the tail
    std::vector<double> head;

    [[nodiscard]] double segment_length(std::size_t segment, std::size_t sample) const {
        return feet[segment + 1][sample] - feet[segment][sample];
    }
};

/// Backward-Euler integration of the foot chain: velocities are solved
/// implicitly by Newton on the tridiagonal system each step, positions
/// follow. Output is sampled on the drive grid. Throws InvalidArgument or
/// NumericalInstability when a segment leaves (0, 3 rest_length).
GaitTrace simulate_locomotion(const BodyConfig& body, const FrictionModel& friction, const SegmentDrive& drive,
                              double dt);

struct GaitMetrics {
    double mean_velocity = 0.0;           // mm/s
    double stride_per_cycle = 0.0;        // mm
    double body_lengths_per_second = 0.0; // 1/s
};

/// Skips one period, then fits a line to the head position. Throws
/// TraceTooShort when fewer than three periods remain.
GaitMetrics gait_metrics(const GaitTrace& trace, double period, const BodyConfig& body);

struct FrictionCalibration {
    FrictionModel friction;
    double achieved_velocity = 0.0;
    int iterations = 0;
};

/// Bisection on mu_backward / mu_forward within [ratio_min, ratio_max] so
/// that |mean velocity| hits `target_velocity`. Throws CalibrationFailed
/// when the interval does not bracket the target.
FrictionCalibration calibrate_friction_ratio(const BodyConfig& body, const FrictionModel& tmpl,
                                             const SegmentDrive& drive, double dt, double period,
                                             double target_velocity, double ratio_min = 1.0,
                                             double ratio_max = 100.0, double rel_tolerance = 1e-4);

}  // namespace plg
