#include "plg/actuator.hpp"

#include "plg/error.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace plg {

double ElongationModel::at(double ad) const {
    return std::max(0.0, x_sat - amplitude * std::exp(-ad / tau));
}

double elongation_at(const ElongationModel& model, double ad) {
    if (!(ad >= 0.0)) throw InvalidArgument("actuation duration must be non-negative");
    return model.at(ad);
}

double rmse(const ElongationModel& model, const std::vector<ElongationDataPoint>& points) {
    if (points.empty()) return 0.0;
    double ss = 0.0;
    for (const auto& p : points) {
        const double r = model.x_sat - model.amplitude * std::exp(-p.actuation_duration / model.tau) - p.deformation;
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(points.size()));
}

namespace {

struct ExpResidual : Eigen::DenseFunctor<double> {
    const std::vector<ElongationDataPoint>& pts;

    explicit ExpResidual(const std::vector<ElongationDataPoint>& p)
        : Eigen::DenseFunctor<double>(3, static_cast<int>(p.size())), pts(p) {}

    int operator()(const InputType& x, ValueType& fvec) const {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            fvec(static_cast<Eigen::Index>(i)) =
                x(0) - x(1) * std::exp(-pts[i].actuation_duration / x(2)) - pts[i].deformation;
        }
        return 0;
    }

    int df(const InputType& x, JacobianType& jac) const {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            const double ad = pts[i].actuation_duration;
            const double e = std::exp(-ad / x(2));
            jac(r, 0) = 1.0;
            jac(r, 1) = -e;
            jac(r, 2) = -x(1) * e * ad / (x(2) * x(2));
        }
        return 0;
    }
};

}  // namespace

ElongationModel fit_elongation(const std::vector<ElongationDataPoint>& points) {
    if (points.size() < 3) {
        throw Underdetermined("three parameters need at least 3 points, got " + std::to_string(points.size()));
    }
    std::set<double> ads;
    for (const auto& p : points) {
        if (!(p.pressure > 0.0) || !(p.wall_thickness > 0.0) || !(p.actuation_duration > 0.0) ||
            !(p.deformation > 0.0)) {
            throw InvalidArgument("data points must be positive");
        }
        if (p.pressure != points[0].pressure || p.wall_thickness != points[0].wall_thickness) {
            throw InvalidArgument("all points of a fit must share pressure and wall thickness");
        }
        if (!ads.insert(p.actuation_duration).second) {
            throw InvalidArgument("duplicate actuation duration " + std::to_string(p.actuation_duration));
        }
    }
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
        return a.deformation < b.deformation;
    });
    if (lo->deformation == hi->deformation) throw DegenerateData("all deformations are equal");

    Eigen::VectorXd x(3);
    x(0) = hi->deformation + 0.5;
    x(1) = x(0) - lo->deformation;
    x(2) = 300.0;

    ExpResidual f(points);
    Eigen::LevenbergMarquardt<ExpResidual> lm(f);
    lm.setXtol(1e-14);
    lm.setFtol(1e-14);
    lm.setMaxfev(2000);
    lm.minimize(x);

    ElongationModel m;
    m.x_sat = x(0);
    m.amplitude = x(1);
    m.tau = x(2);
    m.pressure = points[0].pressure;
    m.wall_thickness = points[0].wall_thickness;
    if (!std::isfinite(m.x_sat) || !(m.amplitude > 0.0) || !(m.tau > 0.0) || !(m.x_sat > 0.0)) {
        throw DegenerateData("fit does not yield an increasing saturating curve");
    }
    m.fit_rmse = rmse(m, points);
    return m;
}

ElongationModelSet::ElongationModelSet(std::vector<ElongationModel> anchors) : anchors_(std::move(anchors)) {
    std::sort(anchors_.begin(), anchors_.end(),
              [](const auto& a, const auto& b) { return a.pressure < b.pressure; });
    for (std::size_t i = 1; i < anchors_.size(); ++i) {
        if (anchors_[i].pressure == anchors_[i - 1].pressure) {
            throw InvalidArgument("two elongation models at the same pressure");
        }
    }
}

double ElongationModelSet::interpolate(double p, double ElongationModel::*field) const {
    if (anchors_.empty()) throw InvalidArgument("empty elongation model set");
    if (p <= anchors_.front().pressure) return anchors_.front().*field;
    if (p >= anchors_.back().pressure) return anchors_.back().*field;
    const auto hi = std::upper_bound(anchors_.begin(), anchors_.end(), p,
                                     [](double v, const auto& a) { return v < a.pressure; });
    const auto lo = hi - 1;
    const double w = (p - lo->pressure) / (hi->pressure - lo->pressure);
    return (1.0 - w) * ((*lo).*field) + w * ((*hi).*field);
}

double ElongationModelSet::x_sat_at(double p) const { return interpolate(p, &ElongationModel::x_sat); }
double ElongationModelSet::tau_at(double p) const { return interpolate(p, &ElongationModel::tau); }

std::vector<double> elongation_dynamic(const ElongationModelSet& models, const std::vector<double>& drive,
                                       double dt_s, double tau_release_ms, double threshold) {
    if (!(dt_s > 0.0) || !(tau_release_ms > 0.0)) throw InvalidArgument("dt and tau_release must be positive");
    if (models.empty()) throw InvalidArgument("empty elongation model set");
    std::vector<double> e(drive.size(), 0.0);
    const double dt_ms = dt_s * 1000.0;
    const double release_keep = std::exp(-dt_ms / tau_release_ms);
    for (std::size_t k = 1; k < drive.size(); ++k) {
        const double p = drive[k - 1];
        if (p >= threshold) {
            const double target = models.x_sat_at(p);
            const double keep = std::exp(-dt_ms / models.tau_at(p));
            e[k] = target + (e[k - 1] - target) * keep;
        } else {
            e[k] = e[k - 1] * release_keep;
        }
    }
    return e;
}

const char* to_string(IntegrityStatus s) noexcept {
    return s == IntegrityStatus::Ok ? "OK" : "FatigueFailure";
}

IntegrityStatus check_integrity(double t, double p, double ad) {
    if (!(t > 0.0) || !(p > 0.0) || !(ad > 0.0)) throw InvalidArgument("integrity arguments must be positive");
    return (t <= 1.3 && p >= 2.0 && ad >= 1000.0) ? IntegrityStatus::FatigueFailure : IntegrityStatus::Ok;
}

std::vector<ElongationDataPoint> reference_elongation_points() {
    std::vector<ElongationDataPoint> pts;
    const double ads[] = {200.0, 400.0, 600.0, 800.0};
    const double at20[] = {9.2, 10.8, 11.6, 11.9};
    const double at23[] = {10.1, 12.3, 13.0, 14.0};
    for (int i = 0; i < 4; ++i) pts.push_back({2.0, 1.6, ads[i], at20[i]});
    for (int i = 0; i < 4; ++i) pts.push_back({2.3, 1.6, ads[i], at23[i]});
    return pts;
}

std::vector<std::vector<ElongationDataPoint>> group_by_condition(const std::vector<ElongationDataPoint>& points) {
    std::map<std::pair<double, double>, std::vector<ElongationDataPoint>> groups;
    for (const auto& p : points) groups[{p.wall_thickness, p.pressure}].push_back(p);
    std::vector<std::vector<ElongationDataPoint>> out;
    for (auto& [key, g] : groups) out.push_back(std::move(g));
    return out;
}

namespace {

double parse_field(std::string_view s, int line) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw Error(Errc::Parse, "line " + std::to_string(line) + ": not a number: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::vector<ElongationDataPoint> parse_elongation_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::Parse, "empty elongation CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "pressure_bar,thickness_mm,ad_ms,deformation_mm") {
        throw Error(Errc::Parse, "line 1: expected header 'pressure_bar,thickness_mm,ad_ms,deformation_mm'");
    }
    std::vector<ElongationDataPoint> pts;
    int n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (;;) {
            const auto c = rest.find(',');
            f.push_back(rest.substr(0, c));
            if (c == std::string_view::npos) break;
            rest.remove_prefix(c + 1);
        }
        if (f.size() != 4) {
            throw Error(Errc::Parse, "line " + std::to_string(n) + ": expected 4 fields, got " + std::to_string(f.size()));
        }
        ElongationDataPoint p{parse_field(f[0], n), parse_field(f[1], n), parse_field(f[2], n), parse_field(f[3], n)};
        if (!(p.pressure > 0.0) || !(p.wall_thickness > 0.0) || !(p.actuation_duration > 0.0) ||
            !(p.deformation > 0.0)) {
            throw Error(Errc::Parse, "line " + std::to_string(n) + ": values must be positive");
        }
        pts.push_back(p);
    }
    return pts;
}

std::vector<ElongationDataPoint> read_elongation_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return parse_elongation_csv(in);
}

}  // namespace plg
