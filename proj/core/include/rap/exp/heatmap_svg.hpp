#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rap/eval/reports.hpp"

namespace rap::exp {

/// One rect per cell, friction on x and mass on y (mass increasing upward).
/// Fill is a linear ramp from the grid minimum (dark) to maximum (bright);
/// a constant grid uses the middle of the ramp. Each cell prints its mean.
std::string heatmap_svg(const eval::TransferGrid& grid, std::string_view title = "");

void emit_heatmap_svg(const eval::TransferGrid& grid, const std::filesystem::path& path,
                      std::string_view title = "");

/// Fill colour for a ramp position t in [0, 1], as "#rrggbb".
std::string ramp_color(double t);

}  // namespace rap::exp
