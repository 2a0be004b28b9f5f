#pragma once

// Plain SVG figures. Coordinates are rounded to 1e-4 user units so the output
// is byte-stable for fixed input.

#include <string>
#include <vector>

#include "annulus/bricks.hpp"
#include "annulus/lines.hpp"

namespace annulus::svg {

struct View {
  double xlo = 0, xhi = 2, ylo = -1, yhi = 1;
};

/// Lines over two fundamental domains [xlo, xlo + 2]; deck translates of each
/// line are drawn faintly as ghosts.
std::string lines_figure(const std::vector<EssentialLine>& lines, const View& view);

/// Bricks coloured by T-orbit, the region shaded, extracted lines on top.
std::string bricks_figure(const bricks::BrickComplex& complex, const bricks::RegionReport* region,
                          const std::vector<EssentialLine>& lines, const View& view);

}  // namespace annulus::svg
