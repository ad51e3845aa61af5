#pragma once

#include <string>
#include <vector>

#include "povmkit/region.hpp"

namespace povmkit {

// Renders compatibility-region boundary curves of up to three noise models
// as a standalone SVG: unit-square axes, a legend, and optionally a second
// panel zoomed into [0.7, 1]^2 where the models differ.
std::string regions_to_svg(const std::vector<CompatibilityRegion>& regions,
                           bool zoom_panel);

}  // namespace povmkit
