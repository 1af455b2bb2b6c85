#ifndef FADECODE_SVG_PLOT_HPP
#define FADECODE_SVG_PLOT_HPP

#include <string>
#include <vector>

#include "fadecode/evaluation.hpp"

namespace fadecode {

// self-contained SVG waterfall plot: linear x (dB), log10 y, one polyline
// per curve with a legend. Zero-BLER points are dropped from the polyline.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<BlerCurve>& curves);

}  // namespace fadecode

#endif
