#pragma once

#include "knde/experiments.hpp"

#include <string>

namespace knde {

//! Log-log error-vs-n plot: one polyline per metric (l1, linf) with the
//! fitted slope annotated. Throws on an empty report.
std::string render_convergence_svg(const ConvergenceReport& report);

//! Ratio-vs-n plot (log n axis) with the horizontal reference line at
//! ratio = 1. Throws on an empty report.
std::string render_ratio_svg(const RatioReport& report);

}  // namespace knde
