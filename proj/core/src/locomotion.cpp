#include "plg/locomotion.hpp"

#include "plg/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plg {

void FrictionModel::check() const {
    if (!(mu_forward >= 0.0) || !(mu_backward >= 0.0)) throw InvalidArgument("friction coefficients must be >= 0");
    if (!(v_smoothing > 0.0) || !(gravity > 0.0)) throw InvalidArgument("v_smoothing and gravity must be positive");
}

FrictionModel FrictionModel::with_ratio(double r) const {
    FrictionModel f = *this;
    f.mu_backward = mu_forward * r;
    return f;
}

FrictionModel FrictionModel::mirrored() const {
    FrictionModel f = *this;
    std::swap(f.mu_forward, f.mu_backward);
    return f;
}

void BodyConfig::check() const {
    if (n_segments < 1) throw InvalidArgument("body needs at least one segment");
    if (!(rest_length > 0.0) || !(foot_mass > 0.0) || !(stiffness > 0.0) || !(damping >= 0.0)) {
        throw InvalidArgument("body lengths, masses and stiffness must be positive");
    }
}

SegmentDrive SegmentDrive::reversed() const {
    SegmentDrive d = *this;
    std::reverse(d.commanded.begin(), d.commanded.end());
    return d;
}

SegmentDrive build_drive(const PressureTrace& trace, const std::vector<std::string>& segment_nodes,
                         const ElongationModelSet& models, double rest_length, double tau_release_ms,
                         double threshold_bar) {
    SegmentDrive drive;
    drive.dt = trace.dt;
    for (std::size_t i = 0; i < segment_nodes.size(); ++i) {
        const std::string& node = segment_nodes[i];
        if (node.empty() || trace.index_of(node) < 0) {
            throw UnmappedSegment("segment " + std::to_string(i) + " has no pressure node" +
                                  (node.empty() ? std::string() : " ('" + node + "' not in trace)"));
        }
        auto e = elongation_dynamic(models, trace.series(node), trace.dt, tau_release_ms, threshold_bar);
        for (double& v : e) v += rest_length;
        drive.commanded.push_back(std::move(e));
    }
    return drive;
}

namespace {

// Solves a symmetric tridiagonal system in place (diag d, off-diagonal o).
void thomas(std::vector<double> d, const std::vector<double>& o, std::vector<double>& rhs) {
    const std::size_t n = d.size();
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double w = o[i - 1] / d[i - 1];
            d[i] -= w * o[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
    }
    rhs[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - o[i] * rhs[i + 1]) / d[i];
}

struct ChainStep {
    const BodyConfig& body;
    const FrictionModel& fr;
    double dt;
    double normal;  // N, per foot

    double friction(double v) const {
        const double mu = v > 0.0 ? fr.mu_forward : fr.mu_backward;
        return mu * normal * std::tanh(v / fr.v_smoothing);
    }
    double friction_slope(double v) const {
        const double mu = v > 0.0 ? fr.mu_forward : fr.mu_backward;
        const double t = std::tanh(v / fr.v_smoothing);
        return mu * normal * (1.0 - t * t) / fr.v_smoothing;
    }

    // Residual in N of the implicit update for new velocities w.
    void residual(const std::vector<double>& x, const std::vector<double>& v, const std::vector<double>& w,
                  const std::vector<double>& cmd, std::vector<double>& r) const {
        const std::size_t n = x.size();
        const double inertia = body.foot_mass / (1000.0 * dt);
        for (std::size_t j = 0; j < n; ++j) r[j] = inertia * (w[j] - v[j]) + friction(w[j]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double rate = w[i + 1] - w[i];
            const double len = x[i + 1] - x[i] + dt * rate;
            const double f = body.stiffness * (cmd[i] - len) - body.damping * rate;
            r[i + 1] -= f;
            r[i] += f;
        }
    }
};

double inf_norm(const std::vector<double>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

GaitTrace simulate_locomotion(const BodyConfig& body, const FrictionModel& friction, const SegmentDrive& drive,
                              double dt) {
    body.check();
    friction.check();
    if (static_cast<int>(drive.commanded.size()) != body.n_segments) {
        throw InvalidArgument("drive has " + std::to_string(drive.commanded.size()) + " segments, body has " +
                              std::to_string(body.n_segments));
    }
    if (drive.samples() == 0 || !(drive.dt > 0.0)) throw InvalidArgument("empty drive");
    for (const auto& c : drive.commanded) {
        if (c.size() != drive.samples()) throw InvalidArgument("drive series lengths differ");
    }
    if (!(dt > 0.0) || dt > drive.dt * (1.0 + 1e-9)) throw InvalidArgument("dt must lie in (0, drive dt]");
    const auto sub = static_cast<std::size_t>(std::llround(drive.dt / dt));
    if (std::abs(static_cast<double>(sub) * dt - drive.dt) > 1e-9 * drive.dt) {
        throw InvalidArgument("drive step must be an integer multiple of dt");
    }

    const std::size_t n_feet = static_cast<std::size_t>(body.n_segments) + 1;
    const std::size_t n_seg = n_feet - 1;
    const std::size_t samples = drive.samples();
    std::vector<double> x(n_feet, 0.0), v(n_feet, 0.0), w(n_feet, 0.0), r(n_feet), trial(n_feet), rt(n_feet);
    for (std::size_t i = 0; i < n_seg; ++i) x[i + 1] = x[i] + drive.commanded[i][0];

    GaitTrace trace;
    trace.times.reserve(samples);
    trace.feet.assign(n_feet, {});
    for (auto& f : trace.feet) f.reserve(samples);
    auto record = [&](std::size_t k) {
        trace.times.push_back(static_cast<double>(k) * drive.dt);
        for (std::size_t j = 0; j < n_feet; ++j) trace.feet[j].push_back(x[j]);
        trace.head.push_back(body.head_at_last_foot ? x[n_feet - 1] : x[0]);
    };
    record(0);

    const ChainStep step{body, friction, dt, body.foot_mass * friction.gravity / 1000.0};
    const double inertia = body.foot_mass / (1000.0 * dt);
    const double coupling = body.stiffness * dt + body.damping;
    const double tol = 1e-10 * std::max(1.0, step.normal);
    std::vector<double> cmd(n_seg), diag(n_feet), off(n_seg);

    for (std::size_t k = 0; k + 1 < samples; ++k) {
        for (std::size_t s = 1; s <= sub; ++s) {
            const double a = static_cast<double>(s) / static_cast<double>(sub);
            for (std::size_t i = 0; i < n_seg; ++i) {
                cmd[i] = (1.0 - a) * drive.commanded[i][k] + a * drive.commanded[i][k + 1];
            }
            w = v;
            step.residual(x, v, w, cmd, r);
            double norm = inf_norm(r);
            for (int it = 0; it < 60 && norm > tol; ++it) {
                for (std::size_t j = 0; j < n_feet; ++j) {
                    const double deg = (j > 0 ? 1.0 : 0.0) + (j + 1 < n_feet ? 1.0 : 0.0);
                    diag[j] = inertia + deg * coupling + step.friction_slope(w[j]);
                }
                std::fill(off.begin(), off.end(), -coupling);
                rt = r;
                thomas(diag, off, rt);
                double lambda = 1.0;
                for (int ls = 0; ls < 30; ++ls) {
                    for (std::size_t j = 0; j < n_feet; ++j) trial[j] = w[j] - lambda * rt[j];
                    step.residual(x, v, trial, cmd, r);
                    if (inf_norm(r) < norm) break;
                    lambda *= 0.5;
                }
                w = trial;
                norm = inf_norm(r);
            }
            for (std::size_t j = 0; j < n_feet; ++j) x[j] += dt * w[j];
            v = w;
            for (std::size_t i = 0; i < n_seg; ++i) {
                const double len = x[i + 1] - x[i];
                if (!(len > 0.0) || !(len < 3.0 * body.rest_length)) {
                    std::ostringstream os;
                    os << "segment " << i << " length " << len << " mm left (0, " << 3.0 * body.rest_length
                       << ") at t=" << static_cast<double>(k) * drive.dt + static_cast<double>(s) * dt << " s";
                    throw NumericalInstability(os.str());
                }
            }
        }
        record(k + 1);
    }
    return trace;
}

namespace {

double head_at(const GaitTrace& tr, double t) {
    const auto it = std::lower_bound(tr.times.begin(), tr.times.end(), t);
    if (it == tr.times.begin()) return tr.head.front();
    if (it == tr.times.end()) return tr.head.back();
    const auto i = static_cast<std::size_t>(it - tr.times.begin());
    const double w = (t - tr.times[i - 1]) / (tr.times[i] - tr.times[i - 1]);
    return (1.0 - w) * tr.head[i - 1] + w * tr.head[i];
}

}  // namespace

GaitMetrics gait_metrics(const GaitTrace& trace, double period, const BodyConfig& body) {
    if (!(period > 0.0)) throw InvalidArgument("period must be positive");
    if (trace.times.size() < 2) throw TraceTooShort("trace has fewer than two samples");
    const double t0 = trace.times.front() + period;
    const double span = trace.times.back() - t0;
    if (span < 3.0 * period * (1.0 - 1e-9)) {
        throw TraceTooShort("need 3 periods after settling, have " + std::to_string(std::max(0.0, span) / period));
    }
    double st = 0.0, sx = 0.0, n = 0.0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] < t0) continue;
        st += trace.times[i];
        sx += trace.head[i];
        n += 1.0;
    }
    const double tm = st / n, xm = sx / n;
    double stt = 0.0, stx = 0.0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] < t0) continue;
        const double dt = trace.times[i] - tm;
        stt += dt * dt;
        stx += dt * (trace.head[i] - xm);
    }
    GaitMetrics m;
    m.mean_velocity = stt > 0.0 ? stx / stt : 0.0;
    const double cycles = std::floor(span / period + 1e-9);
    m.stride_per_cycle = (head_at(trace, t0 + cycles * period) - head_at(trace, t0)) / cycles;
    m.body_lengths_per_second = m.mean_velocity / body.total_rest_length();
    return m;
}

FrictionCalibration calibrate_friction_ratio(const BodyConfig& body, const FrictionModel& tmpl,
                                             const SegmentDrive& drive, double dt, double period,
                                             double target, double lo, double hi, double rel_tol) {
    if (!(target > 0.0)) throw InvalidArgument("target velocity must be positive");
    if (!(tmpl.mu_forward > 0.0)) throw InvalidArgument("calibration needs mu_forward > 0");
    if (!(lo > 0.0 && lo < hi)) throw InvalidArgument("ratio interval must satisfy 0 < min < max");
    FrictionCalibration out;
    auto speed = [&](double r) {
        ++out.iterations;
        return std::abs(gait_metrics(simulate_locomotion(body, tmpl.with_ratio(r), drive, dt), period, body)
                            .mean_velocity);
    };
    double f_lo = speed(lo), f_hi = speed(hi);
    if (!(f_lo <= target && target <= f_hi)) {
        throw CalibrationFailed("friction ratios [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] give velocities [" + std::to_string(f_lo) + ", " + std::to_string(f_hi) +
                                "] mm/s, not bracketing " + std::to_string(target));
    }
    double mid = lo, f_mid = f_lo;
    for (int i = 0; i < 60; ++i) {
        mid = 0.5 * (lo + hi);
        f_mid = speed(mid);
        if (std::abs(f_mid - target) <= rel_tol * target) break;
        (f_mid < target ? lo : hi) = mid;
    }
    out.friction = tmpl.with_ratio(mid);
    out.achieved_velocity = f_mid;
    return out;
}

}  // namespace plg
