// Copyright (c) 2026, The moelab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace moelab::harness {

struct BarSeries {
    std::string name;
    std::vector<double> values;
};

/// Grouped bar chart as a standalone SVG document. `comment` is embedded as an
/// XML comment (used for provenance).
std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series, const std::string& comment = {});

} // namespace moelab::harness
