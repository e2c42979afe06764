#pragma once

#include <string>
#include <utility>
#include <vector>

namespace plgsim {

struct Series {
    std::string label;
    std::vector<double> y;
};

/// Static line chart: shared x, one polyline per series, axis extents
/// labelled. Long series are decimated to at most `max_points` vertices.
std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<double>& x, const std::vector<Series>& series,
                           std::size_t max_points = 2000);

}  // namespace plgsim
