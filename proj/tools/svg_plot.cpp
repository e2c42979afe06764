#include "svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace plgsim {

namespace {

constexpr double kW = 720, kH = 360, kL = 70, kR = 140, kT = 36, kB = 48;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<double>& x, const std::vector<Series>& series, std::size_t max_points) {
    double x0 = x.empty() ? 0.0 : x.front(), x1 = x.empty() ? 1.0 : x.back();
    double y0 = 0.0, y1 = 0.0;
    bool any = false;
    for (const auto& s : series) {
        for (double v : s.y) {
            y0 = any ? std::min(y0, v) : v;
            y1 = any ? std::max(y1, v) : v;
            any = true;
        }
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) y1 = y0 + 1.0;
    const double pw = kW - kL - kR, ph = kH - kT - kB;
    auto px = [&](double v) { return kL + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return kT + (1.0 - (v - y0) / (y1 - y0)) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << esc(title) << "</text>\n"
       << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#444\"/>\n"
       << "<text x=\"" << kL << "\" y=\"" << kH - 26 << "\" text-anchor=\"middle\">" << f2(x0) << "</text>\n"
       << "<text x=\"" << kL + pw << "\" y=\"" << kH - 26 << "\" text-anchor=\"middle\">" << f2(x1) << "</text>\n"
       << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 8 << "\" text-anchor=\"middle\">" << esc(x_label)
       << "</text>\n"
       << "<text x=\"" << kL - 6 << "\" y=\"" << kT + 4 << "\" text-anchor=\"end\">" << f2(y1) << "</text>\n"
       << "<text x=\"" << kL - 6 << "\" y=\"" << kT + ph << "\" text-anchor=\"end\">" << f2(y0) << "</text>\n"
       << "<text transform=\"translate(16," << kT + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << esc(y_label) << "</text>\n";

    const std::size_t n = x.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + max_points - 1) / std::max<std::size_t>(max_points, 1));
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kColors[i % (sizeof kColors / sizeof kColors[0])];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t m = std::min(n, series[i].y.size());
        for (std::size_t k = 0; k < m; k += stride) os << f2(px(x[k])) << ',' << f2(py(series[i].y[k])) << ' ';
        if (m > 0 && (m - 1) % stride != 0) os << f2(px(x[m - 1])) << ',' << f2(py(series[i].y[m - 1]));
        os << "\"/>\n";
        const double ly = kT + 14 + 18 * static_cast<double>(i);
        os << "<line x1=\"" << kW - kR + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kW - kR + 32 << "\" y2=\""
           << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << kW - kR + 38 << "\" y=\"" << ly << "\">" << esc(series[i].label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace plgsim
