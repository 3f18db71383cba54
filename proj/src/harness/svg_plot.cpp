// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#include "moelab/harness/svg_plot.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "moelab/core/error.h"

namespace moelab::harness {

namespace {

constexpr std::array<const char*, 6> kColours = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#b07aa1"};

std::string escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series, const std::string& comment) {
    for (const auto& s : series) {
        if (s.values.size() != categories.size()) {
            throw DimensionError("bar chart series '" + s.name + "' has " + std::to_string(s.values.size()) +
                                 " values for " + std::to_string(categories.size()) + " categories");
        }
    }
    double top = 0.0;
    for (const auto& s : series) {
        for (const double v : s.values) top = std::max(top, v);
    }
    if (top <= 0.0) top = 1.0;

    const double left = 60, right = 20, upper = 40, lower = 60;
    const double group = 24.0 * static_cast<double>(std::max<std::size_t>(series.size(), 1)) + 16.0;
    const double plot_w = std::max(240.0, group * static_cast<double>(categories.size()));
    const double plot_h = 220;
    const double width = left + plot_w + right;
    const double height = upper + plot_h + lower;
    const double slot = plot_w / static_cast<double>(std::max<std::size_t>(categories.size(), 1));
    const double bar_w = (slot - 16.0) / static_cast<double>(std::max<std::size_t>(series.size(), 1));

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!comment.empty()) os << "<!-- " << escape(comment) << " -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
       << "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = top * t / 4.0;
        const double y = upper + plot_h - plot_h * t / 4.0;
        os << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
           << num(y) << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(v)
           << "</text>\n";
    }
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double x0 = left + slot * static_cast<double>(c) + 8.0;
        for (std::size_t s = 0; s < series.size(); ++s) {
            const double h = plot_h * std::max(0.0, series[s].values[c]) / top;
            os << "<rect x=\"" << num(x0 + bar_w * static_cast<double>(s)) << "\" y=\"" << num(upper + plot_h - h)
               << "\" width=\"" << num(bar_w) << "\" height=\"" << num(h) << "\" fill=\""
               << kColours[s % kColours.size()] << "\"/>\n";
        }
        os << "<text x=\"" << num(x0 + (slot - 16.0) / 2) << "\" y=\"" << num(upper + plot_h + 16)
           << "\" text-anchor=\"middle\">" << escape(categories[c]) << "</text>\n";
    }
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(upper + plot_h) << "\" x2=\"" << num(left + plot_w)
       << "\" y2=\"" << num(upper + plot_h) << "\" stroke=\"black\"/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double x = left + 110.0 * static_cast<double>(s);
        const double y = height - 18;
        os << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
           << kColours[s % kColours.size()] << "\"/>\n";
        os << "<text x=\"" << num(x + 14) << "\" y=\"" << num(y) << "\">" << escape(series[s].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace moelab::harness
