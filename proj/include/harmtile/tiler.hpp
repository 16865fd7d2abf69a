#pragma once

#include <vector>

#include "harmtile/decomp.hpp"

namespace harmtile {

// Marker-sweep tilings of the classified components, coverage verification,
// and the assembled surface with its cone report.

enum class TargetKind { Rectangle, Cylinder, SlicedRectangle };

struct RectTile {
  int seg = -1;       // refined segment carrying this tile
  int lower = -1;     // refined endpoint at x0
  int upper = -1;     // refined endpoint at x1
  double x0 = 0, x1 = 0;  // value axis
  double y0 = 0, y1 = 0;  // flux axis (raw sweep chart; cylinders wrap mod C)
  bool embedded = true;
  bool degenerate = false;
};

struct Marker {
  int seg = -1;
  double x0 = 0, x1 = 0, y = 0;  // top edge of the tile, rightmost end at x1
  bool degenerate = false;
};

struct CoverageReport {
  int raster = 0;
  long long sampled = 0;   // samples off the seam set
  long long skipped = 0;   // samples within seam tolerance
  int degenerateTiles = 0;
};

struct SliceImage {
  int rv = -1;  // identified refined vertex
  std::vector<std::pair<double, double>> blocks;  // y-spans of its sheets
};

struct TiledComponent {
  TargetKind target = TargetKind::Rectangle;
  int component = -1;
  double lo = 0, hi = 0;  // value band
  double W = 0;           // hi - lo
  double H = 0;           // flux height (== C on cylinders)
  double C = 0;           // circumference, cylinders only
  double energy = 0;      // sum of c (du)^2 over the component
  std::vector<RectTile> tiles;
  std::vector<Marker> markers;
  std::vector<SliceImage> slices;
  CoverageReport coverage;
};

struct ConeEntry {
  int rv = -1;
  double angle = 0;      // pi/2 corners, pi slice sheets, pi*sgc interior
  int multiplicity = 1;  // sheets at slice points
  enum class Kind { Corner, Slice, Interior } kind = Kind::Corner;
  bool boundary = true;
};

struct SurfaceNet {
  std::vector<TiledComponent> parts;  // indexed like Decomposition components
  std::vector<GluingEdge> seams;
  std::vector<ConeEntry> cones;
  double energy = 0;
  int boundaryComponents = 0;  // m of the source domain
};

struct DoubledCone {
  int rv = -1;
  double angle = 0;
  int copies = 1;
};

struct DoublingReport {
  int genus = 0;
  double area = 0;  // 2 E(g)
  std::vector<DoubledCone> cones;
};

// the marker sweep; raster <= 0 skips the coverage pass
TiledComponent tileComponent(const Decomposition& dec, int compId,
                             int raster = 1000);
TiledComponent tileQuadrilateral(const Decomposition& dec, int compId,
                                 int raster = 1000);
TiledComponent tileAnnulus(const Decomposition& dec, int compId,
                           int raster = 1000);
TiledComponent tileSlicedQuadrilateral(const Decomposition& dec, int compId,
                                       int raster = 1000);

SurfaceNet assembleSurface(const Decomposition& dec, int raster = 1000);
DoublingReport doublingReport(const SurfaceNet& net);

}  // namespace harmtile
