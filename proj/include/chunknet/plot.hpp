#pragma once

#include <span>
#include <string>

#include "chunknet/experiment.hpp"

namespace chunknet {

/// A labeled vertical marker, e.g. an analytic capacity bound.
struct BoundMark {
    std::string label;
    double n = 0.0;
};

/// Self-contained SVG: one curve per (table, code) with 95% CI whiskers,
/// x = n, y = success rate, plus optional vertical bound markers. Output is
/// a pure function of the inputs (fixed palette, fixed number formatting).
/// Throws std::invalid_argument when no table has any point.
std::string render_sweep_svg(std::span<const SweepTable> tables,
                             std::span<const BoundMark> marks = {});
std::string render_sweep_svg(const SweepTable& table);

} // namespace chunknet
