// quick text dump of the full pipeline for one network; handy when a fixture
// misbehaves and the JSON reports are too much
#include <cstdio>
#include <string>

#include "harmtile/bvp.hpp"
#include "harmtile/decomp.hpp"
#include "harmtile/errors.hpp"
#include "harmtile/fixtures.hpp"
#include "harmtile/io.hpp"
#include "harmtile/tiler.hpp"

using namespace harmtile;

static const char* tname(TargetKind k) {
  switch (k) {
    case TargetKind::Rectangle: return "Rect";
    case TargetKind::SlicedRectangle: return "Sliced";
    case TargetKind::Cylinder: return "Cyl";
  }
  return "?";
}

int main(int argc, char** argv) {
  std::string name = argc > 1 ? argv[1] : "FIX-QUAD";
  RawComplex raw = name.rfind("FIX-", 0) == 0 || name.rfind("random:", 0) == 0
                       ? genFixture(name)
                       : loadComplexFile(name);
  CellComplex cx = CellComplex::build(raw);
  BoundarySpec bs = deriveBoundarySpec(cx, raw);
  Potential pot = solveDNBVP(cx, bs);
  Decomposition dec = decompose(cx, bs, pot.g);
  std::printf("%s: %zu components, energy=%.12f\n", name.c_str(),
              dec.components.size(), dirichletEnergy(cx, pot.g));
  SurfaceNet net;
  try {
    net = assembleSurface(dec, argc > 2 ? std::stoi(argv[2]) : 200);
  } catch (const Error& e) {
    std::printf("assemble failed: %s\n", e.what());
    return static_cast<int>(e.cls());
  }
  for (size_t ci = 0; ci < net.parts.size(); ++ci) {
    const auto& tc = net.parts[ci];
    std::printf("-- comp %zu %s band=(%.6f,%.6f) W=%.9f H=%.9f C=%.9f"
                " E=%.12f tiles=%zu slices=%zu\n",
                ci, tname(tc.target), tc.lo, tc.hi, tc.W, tc.H, tc.C,
                tc.energy, tc.tiles.size(), tc.slices.size());
    if (tc.tiles.size() <= 16)
      for (const auto& t : tc.tiles)
        std::printf("   tile seg=%d x[%.9f,%.9f] y[%.9f,%.9f]%s%s\n", t.seg,
                    t.x0, t.x1, t.y0, t.y1, t.embedded ? "" : " Q",
                    t.degenerate ? " degen" : "");
    for (const auto& s : tc.slices) {
      std::printf("   slice rv=%d blocks:", s.rv);
      for (auto [a, b] : s.blocks) std::printf(" [%.9f,%.9f]", a, b);
      std::printf("\n");
    }
    std::printf("   coverage raster=%d sampled=%lld skipped=%lld\n",
                tc.coverage.raster, (long long)tc.coverage.sampled,
                (long long)tc.coverage.skipped);
  }
  std::printf("seams=%zu boundaryComponents=%d\n", net.seams.size(),
              net.boundaryComponents);
  for (const auto& c : net.cones)
    std::printf("cone rv=%d angle=%.9f mult=%d boundary=%d\n", c.rv, c.angle,
                c.multiplicity, c.boundary ? 1 : 0);
  DoublingReport dr = doublingReport(net);
  std::printf("double: genus=%d area=%.12f cones=%zu\n", dr.genus, dr.area,
              dr.cones.size());
  return 0;
}
