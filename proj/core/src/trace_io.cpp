#include "plg/trace_io.hpp"

#include "plg/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace plg {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::Parse, what); }

double num(const std::string& s, std::size_t row) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
        bad("row " + std::to_string(row + 2) + ": not a number: '" + s + "'");
    }
    return v;
}

void expect_prefix(const CsvTable& t, const std::string& first) {
    if (t.header.empty() || t.header.front() != first) bad("expected first column '" + first + "'");
}

std::string strip_suffix(const std::string& s, const std::string& suffix) {
    if (s.size() <= suffix.size() || s.compare(s.size() - suffix.size(), suffix.size(), suffix) != 0) {
        bad("column '" + s + "' lacks suffix '" + suffix + "'");
    }
    return s.substr(0, s.size() - suffix.size());
}

void require_header(const CsvTable& t, const std::vector<std::string>& cols) {
    if (t.header != cols) {
        std::string want;
        for (const auto& c : cols) want += (want.empty() ? "" : ",") + c;
        bad("expected header '" + want + "'");
    }
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            const auto c = line.find(',', start);
            f.push_back(line.substr(start, c == std::string::npos ? std::string::npos : c - start));
            if (c == std::string::npos) break;
            start = c + 1;
        }
        if (first) {
            t.header = std::move(f);
            first = false;
        } else {
            if (f.size() != t.header.size()) {
                bad("row " + std::to_string(t.rows.size() + 2) + " has " + std::to_string(f.size()) +
                    " fields, header has " + std::to_string(t.header.size()));
            }
            t.rows.push_back(std::move(f));
        }
    }
    if (first) bad("empty CSV");
    return t;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

void write_pressure_csv(std::ostream& out, const PressureTrace& tr) {
    out << "time_s";
    for (const auto& n : tr.nodes) out << ',' << n << "_bar";
    out << '\n';
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        out << fixed6(tr.times[k]);
        for (const auto& s : tr.pressure) out << ',' << fixed6(s[k]);
        out << '\n';
    }
}

PressureTrace read_pressure_csv(std::istream& in) {
    const CsvTable t = read_csv(in);
    expect_prefix(t, "time_s");
    PressureTrace tr;
    for (std::size_t c = 1; c < t.header.size(); ++c) tr.nodes.push_back(strip_suffix(t.header[c], "_bar"));
    tr.pressure.assign(tr.nodes.size(), {});
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        tr.times.push_back(num(t.rows[r][0], r));
        for (std::size_t c = 1; c < t.header.size(); ++c) tr.pressure[c - 1].push_back(num(t.rows[r][c], r));
    }
    tr.dt = tr.times.size() > 1 ? tr.times[1] - tr.times[0] : 0.0;
    return tr;
}

void write_logic_csv(std::ostream& out, const LogicTrace& tr) {
    out << "time_s";
    for (const auto& n : tr.nodes) out << ',' << n;
    out << '\n';
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        out << fixed6(tr.times[k]);
        for (const auto& s : tr.levels) out << ',' << to_char(s[k]);
        out << '\n';
    }
}

LogicTrace read_logic_csv(std::istream& in) {
    const CsvTable t = read_csv(in);
    expect_prefix(t, "time_s");
    LogicTrace tr;
    tr.nodes.assign(t.header.begin() + 1, t.header.end());
    tr.levels.assign(tr.nodes.size(), {});
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        tr.times.push_back(num(t.rows[r][0], r));
        for (std::size_t c = 1; c < t.header.size(); ++c) {
            const std::string& s = t.rows[r][c];
            LogicLevel l{};
            if (s == "0") {
                l = LogicLevel::Low;
            } else if (s == "1") {
                l = LogicLevel::High;
            } else if (s == "X") {
                l = LogicLevel::Indeterminate;
            } else {
                bad("row " + std::to_string(r + 2) + ": bad level '" + s + "'");
            }
            tr.levels[c - 1].push_back(l);
        }
    }
    return tr;
}

void write_gait_csv(std::ostream& out, const GaitTrace& tr) {
    out << "time_s";
    for (std::size_t j = 0; j < tr.feet.size(); ++j) out << ",foot" << j << "_mm";
    out << ",head_mm\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        out << fixed6(tr.times[k]);
        for (const auto& f : tr.feet) out << ',' << fixed6(f[k]);
        out << ',' << fixed6(tr.head[k]) << '\n';
    }
}

GaitTrace read_gait_csv(std::istream& in) {
    const CsvTable t = read_csv(in);
    expect_prefix(t, "time_s");
    if (t.header.size() < 4 || t.header.back() != "head_mm") bad("expected foot columns and a final head_mm");
    const std::size_t n_feet = t.header.size() - 2;
    for (std::size_t j = 0; j < n_feet; ++j) {
        if (t.header[j + 1] != "foot" + std::to_string(j) + "_mm") bad("bad column '" + t.header[j + 1] + "'");
    }
    GaitTrace tr;
    tr.feet.assign(n_feet, {});
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        tr.times.push_back(num(t.rows[r][0], r));
        for (std::size_t j = 0; j < n_feet; ++j) tr.feet[j].push_back(num(t.rows[r][j + 1], r));
        tr.head.push_back(num(t.rows[r].back(), r));
    }
    return tr;
}

void write_fit_csv(std::ostream& out, const std::vector<ElongationModel>& models) {
    out << "pressure_bar,thickness_mm,x_sat_mm,amplitude_mm,tau_ms,rmse_mm\n";
    for (const auto& m : models) {
        out << fixed6(m.pressure) << ',' << fixed6(m.wall_thickness) << ',' << fixed6(m.x_sat) << ','
            << fixed6(m.amplitude) << ',' << fixed6(m.tau) << ',' << fixed6(m.fit_rmse) << '\n';
    }
}

std::vector<ElongationModel> read_fit_csv(std::istream& in) {
    const CsvTable t = read_csv(in);
    require_header(t, {"pressure_bar", "thickness_mm", "x_sat_mm", "amplitude_mm", "tau_ms", "rmse_mm"});
    std::vector<ElongationModel> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        ElongationModel m;
        m.pressure = num(t.rows[r][0], r);
        m.wall_thickness = num(t.rows[r][1], r);
        m.x_sat = num(t.rows[r][2], r);
        m.amplitude = num(t.rows[r][3], r);
        m.tau = num(t.rows[r][4], r);
        m.fit_rmse = num(t.rows[r][5], r);
        out.push_back(m);
    }
    return out;
}

void write_metrics_csv(std::ostream& out, const RunMetrics& m) {
    out << "period_s,mean_velocity_mm_s,stride_mm,body_lengths_per_s\n"
        << fixed6(m.period) << ',' << fixed6(m.gait.mean_velocity) << ',' << fixed6(m.gait.stride_per_cycle) << ','
        << fixed6(m.gait.body_lengths_per_second) << '\n';
}

RunMetrics read_metrics_csv(std::istream& in) {
    const CsvTable t = read_csv(in);
    require_header(t, {"period_s", "mean_velocity_mm_s", "stride_mm", "body_lengths_per_s"});
    if (t.rows.size() != 1) bad("metrics CSV must have exactly one data row");
    RunMetrics m;
    m.period = num(t.rows[0][0], 0);
    m.gait.mean_velocity = num(t.rows[0][1], 0);
    m.gait.stride_per_cycle = num(t.rows[0][2], 0);
    m.gait.body_lengths_per_second = num(t.rows[0][3], 0);
    return m;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace plg
