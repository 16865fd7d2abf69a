#pragma once
#include <string>

#include "harmtile/decomp.hpp"
#include "harmtile/tiler.hpp"

namespace harmtile {

// Diffable SVG renderings: x is the potential axis, y the flux axis (flipped
// to screen coordinates). Tiles come out as axis-aligned rectangles labelled
// by their host edge, slice blocks and seams as dashed strokes, cone points
// as circled markers with angle labels.

std::string renderComponentSvg(const Decomposition& dec,
                               const TiledComponent& tc, double scale = 120);

// all components side by side, plus the seam and cone legend
std::string renderSurfaceSvg(const Decomposition& dec, const SurfaceNet& net,
                             double scale = 120);

}  // namespace harmtile
