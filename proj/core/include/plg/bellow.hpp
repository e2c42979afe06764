#pragma once

namespace plg {

/// Geometry of a printed bellow actuator. Lengths in mm, angles in degrees.
/// Defaults are the standard module bellow; only the wall thickness at the
/// valleys is varied in the characterization experiments.
struct BellowSpec {
    double wall_thickness = 1.6;
    double pitch = 2.65;
    double external_angle = 50.0;
    double internal_angle = 61.0;
    double outer_diameter = 28.0;
    double length = 33.0;

    /// Throws InvalidArgument on non-positive fields or a wall thickness
    /// outside [1.0, 3.0] mm.
    void check() const;

    static BellowSpec with_thickness(double wall_thickness_mm);

    bool operator==(const BellowSpec&) const = default;
};

namespace bellow_presets {
inline constexpr double kThin = 1.3;
inline constexpr double kStandard = 1.6;
inline constexpr double kThick = 1.9;
}  // namespace bellow_presets

}  // namespace plg
