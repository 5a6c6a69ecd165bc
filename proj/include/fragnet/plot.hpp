#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fragnet/series.hpp"

namespace fragnet {

/// Static SVG line chart of x (cross-edge share) against t for each labeled
/// series. Convenience output; the CSV files remain the contract.
std::string render_svg(const std::vector<std::pair<std::string, MetricSeries>>& series);

}  // namespace fragnet
