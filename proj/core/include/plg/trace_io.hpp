#pragma once

// CSV writers and readers for every trace the library produces. Writers use
// fixed six-decimal formatting so identical runs give identical bytes.

#include "plg/actuator.hpp"
#include "plg/error.hpp"
#include "plg/locomotion.hpp"
#include "plg/logic.hpp"
#include "plg/pneumo.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace plg {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, no quoting. Throws Error(Errc::Parse) on ragged rows.
CsvTable read_csv(std::istream& in);

/// `%.6f` with negative zero printed as 0.
std::string fixed6(double v);

// time_s,<node>_bar,...
void write_pressure_csv(std::ostream& out, const PressureTrace& trace);
PressureTrace read_pressure_csv(std::istream& in);

// time_s,<node>,... with levels 0/1/X, one row per change.
void write_logic_csv(std::ostream& out, const LogicTrace& trace);
LogicTrace read_logic_csv(std::istream& in);

// time_s,foot0_mm,...,footN_mm,head_mm
void write_gait_csv(std::ostream& out, const GaitTrace& trace);
GaitTrace read_gait_csv(std::istream& in);

// pressure_bar,thickness_mm,x_sat_mm,amplitude_mm,tau_ms,rmse_mm
void write_fit_csv(std::ostream& out, const std::vector<ElongationModel>& models);
std::vector<ElongationModel> read_fit_csv(std::istream& in);

struct RunMetrics {
    double period = 0.0;  // s
    GaitMetrics gait;
};

// period_s,mean_velocity_mm_s,stride_mm,body_lengths_per_s
void write_metrics_csv(std::ostream& out, const RunMetrics& metrics);
RunMetrics read_metrics_csv(std::istream& in);

void write_text_file(const std::string& path, const std::string& text);

/// Opens `path` for writing and runs `fn` on the stream. Throws IoError.
template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    fn(out);
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace plg
