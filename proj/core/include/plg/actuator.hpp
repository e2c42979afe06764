#pragma once

// Bellow elongation: fitted steady response x(AD) = x_sat - A exp(-AD/tau),
// its first-order dynamic counterpart, and the thin-wall fatigue rule.

#include <iosfwd>
#include <string>
#include <vector>

namespace plg {

struct ElongationDataPoint {
    double pressure = 0.0;            // bar
    double wall_thickness = 0.0;      // mm
    double actuation_duration = 0.0;  // ms
    double deformation = 0.0;         // mm
};

struct ElongationModel {
    double x_sat = 0.0;      // mm
    double amplitude = 0.0;  // mm
    double tau = 0.0;        // ms
    double pressure = 0.0;   // bar
    double wall_thickness = 0.0;
    double fit_rmse = 0.0;   // mm

    /// x_sat - amplitude * exp(-ad / tau), clamped below at 0.
    [[nodiscard]] double at(double actuation_duration_ms) const;
};

/// Least-squares fit (Levenberg-Marquardt, fixed start). Throws
/// Underdetermined for fewer than three points, DegenerateData when the
/// deformations are all equal or the fit does not produce an increasing
/// curve, InvalidArgument for mixed conditions, duplicate ADs or
/// non-positive values.
ElongationModel fit_elongation(const std::vector<ElongationDataPoint>& points);

double elongation_at(const ElongationModel& model, double actuation_duration_ms);

/// Residual RMSE of `model` over `points`.
double rmse(const ElongationModel& model, const std::vector<ElongationDataPoint>& points);

/// Fits for one wall thickness at several supply pressures. x_sat and tau
/// are interpolated linearly in pressure between anchors and held constant
/// outside them.
class ElongationModelSet {
public:
    ElongationModelSet() = default;
    explicit ElongationModelSet(std::vector<ElongationModel> anchors);

    [[nodiscard]] bool empty() const noexcept { return anchors_.empty(); }
    [[nodiscard]] const std::vector<ElongationModel>& anchors() const noexcept { return anchors_; }
    [[nodiscard]] double x_sat_at(double pressure) const;
    [[nodiscard]] double tau_at(double pressure) const;

private:
    [[nodiscard]] double interpolate(double pressure, double ElongationModel::*field) const;
    std::vector<ElongationModel> anchors_;
};

/// Elongation response to a pressure series sampled every `dt_s` seconds.
/// While the drive is at or above `threshold_bar` the bellow relaxes toward
/// x_sat(drive) with tau(drive); below it, toward 0 with tau_release_ms.
/// Uses the exact exponential update per step; e[0] = 0.
std::vector<double> elongation_dynamic(const ElongationModelSet& models, const std::vector<double>& drive_bar,
                                       double dt_s, double tau_release_ms, double threshold_bar);

enum class IntegrityStatus { Ok, FatigueFailure };

const char* to_string(IntegrityStatus status) noexcept;

/// FatigueFailure iff thickness <= 1.3 mm, pressure >= 2.0 bar and
/// AD >= 1000 ms. Throws InvalidArgument on non-positive arguments.
IntegrityStatus check_integrity(double wall_thickness_mm, double pressure_bar, double actuation_duration_ms);

/// The eight characterization averages for the 1.6 mm bellow.
std::vector<ElongationDataPoint> reference_elongation_points();

/// Splits points into (pressure, thickness) groups, ordered by thickness
/// then pressure.
std::vector<std::vector<ElongationDataPoint>> group_by_condition(const std::vector<ElongationDataPoint>& points);

/// CSV with header `pressure_bar,thickness_mm,ad_ms,deformation_mm`. Throws
/// Error(Errc::Parse) on a malformed header or row.
std::vector<ElongationDataPoint> parse_elongation_csv(std::istream& in);
std::vector<ElongationDataPoint> read_elongation_csv(const std::string& path);

}  // namespace plg
