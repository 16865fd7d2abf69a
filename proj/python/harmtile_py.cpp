#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "harmtile/bvp.hpp"
#include "harmtile/complex.hpp"
#include "harmtile/decomp.hpp"
#include "harmtile/fixtures.hpp"
#include "harmtile/io.hpp"
#include "harmtile/morse.hpp"
#include "harmtile/tiler.hpp"

namespace py = pybind11;
using namespace harmtile;

namespace {

struct Session {
  RawComplex raw;
  CellComplex cx;
  BoundarySpec bs;
  Potential pot;
};

Session makeSession(const std::string& doc) {
  Session s{parseComplexText(doc), CellComplex::build(parseComplexText(doc)), {}, {}};
  s.bs = deriveBoundarySpec(s.cx, s.raw);
  s.pot = solveDNBVP(s.cx, s.bs);
  return s;
}

const char* kindName(CompKind k) {
  switch (k) {
    case CompKind::Quadrilateral: return "quadrilateral";
    case CompKind::SlicedQuadrilateral: return "sliced-quadrilateral";
    default: return "annulus";
  }
}

const char* targetName(TargetKind t) {
  switch (t) {
    case TargetKind::Rectangle: return "rectangle";
    case TargetKind::SlicedRectangle: return "sliced-rectangle";
    default: return "cylinder";
  }
}

}  // namespace

PYBIND11_MODULE(_harmtile, m) {
  m.doc() = "harmonic square tilings of planar networks";
  m.attr("__version__") = kVersion;

  m.def("fixture", [](const std::string& name) { return emitComplex(genFixture(name)).dump(2); },
        py::arg("name"), "Named example network as a JSON document string");

  m.def("solve", [](const std::string& doc) {
    auto s = makeSession(doc);
    py::dict g;
    for (int v = 0; v < s.cx.numVertices(); ++v)
      g[py::int_(s.cx.externalId(v))] = s.pot.g[v];
    auto rep = checkConsistency(s.cx, s.bs, s.pot);
    double alpha = 0;
    for (double t : rep.alphaTotals) alpha += t;
    py::dict out;
    out["g"] = g;
    out["energy"] = dirichletEnergy(s.cx, s.pot.g);
    out["alpha_flux"] = alpha;
    out["residual"] = s.pot.residualNorm;
    return out;
  }, py::arg("doc"), "Solve the mixed boundary problem; returns values keyed by vertex id");

  m.def("index", [](const std::string& doc, bool tie_perturb) {
    auto s = makeSession(doc);
    IndexReport rep = indexFormulaCheck(s.cx, s.bs, s.pot.g, tie_perturb);
    py::dict per;
    for (auto& [id, e] : rep.perVertex) {
      py::dict row;
      row["sgc"] = e.sgc;
      row["index"] = e.index;
      per[py::int_(id)] = row;
    }
    py::dict out;
    out["per_vertex"] = per;
    out["interior_singular"] = rep.interiorSingular;
    out["boundary_singular"] = rep.boundarySingular;
    out["total_index"] = rep.totalIndex;
    out["expected"] = rep.expected;
    out["perturbed"] = rep.perturbed;
    return out;
  }, py::arg("doc"), py::arg("tie_perturb") = false,
     "Vertex indices and the boundary identity total");

  m.def("decompose", [](const std::string& doc, bool tie_perturb) {
    auto s = makeSession(doc);
    Decomposition dec = decompose(s.cx, s.bs, s.pot.g, tie_perturb);
    auto seams = verifyGluing(dec);
    py::list comps;
    for (const Component& c : dec.components) {
      py::dict row;
      row["kind"] = kindName(c.kind);
      row["band"] = c.band;
      row["cells"] = c.cells.size();
      row["loops"] = c.loops.size();
      row["corners"] = c.corners;
      comps.append(row);
    }
    py::list seamList;
    for (const GluingEdge& ge : seams) {
      py::dict row;
      row["level"] = ge.level;
      row["below"] = ge.below;
      row["above"] = ge.above;
      row["length"] = ge.lengthBelow;
      row["closed"] = ge.closed;
      seamList.append(row);
    }
    py::dict out;
    out["cuts"] = dec.cuts;
    out["components"] = comps;
    out["seams"] = seamList;
    return out;
  }, py::arg("doc"), py::arg("tie_perturb") = false,
     "Cut at singular levels and classify the pieces");

  m.def("tile", [](const std::string& doc, int raster, bool tie_perturb) {
    auto s = makeSession(doc);
    Decomposition dec = decompose(s.cx, s.bs, s.pot.g, tie_perturb);
    SurfaceNet net = assembleSurface(dec, raster);
    DoublingReport dbl = doublingReport(net);
    py::list parts;
    for (const TiledComponent& tc : net.parts) {
      py::list tiles;
      for (const RectTile& t : tc.tiles) {
        py::dict row;
        row["edge"] = dec.rc.segs()[t.seg].hostEdge;
        row["x0"] = t.x0;
        row["x1"] = t.x1;
        row["y0"] = t.y0;
        row["y1"] = t.y1;
        row["embedded"] = t.embedded;
        row["degenerate"] = t.degenerate;
        tiles.append(row);
      }
      py::dict part;
      part["component"] = tc.component;
      part["target"] = targetName(tc.target);
      part["W"] = tc.W;
      part["H"] = tc.H;
      part["C"] = tc.C;
      part["energy"] = tc.energy;
      part["tiles"] = tiles;
      parts.append(part);
    }
    py::list cones;
    for (const ConeEntry& ce : net.cones) {
      int orig = dec.rc.verts()[ce.rv].orig;
      py::dict row;
      row["vertex"] = orig >= 0 ? py::object(py::int_(dec.rc.base().externalId(orig)))
                                : py::object(py::none());
      row["angle"] = ce.angle;
      row["multiplicity"] = ce.multiplicity;
      row["boundary"] = ce.boundary;
      cones.append(row);
    }
    py::dict doubled;
    doubled["genus"] = dbl.genus;
    doubled["area"] = dbl.area;
    py::dict out;
    out["energy"] = net.energy;
    out["boundary_components"] = net.boundaryComponents;
    out["parts"] = parts;
    out["cones"] = cones;
    out["doubled"] = doubled;
    return out;
  }, py::arg("doc"), py::arg("raster") = 200, py::arg("tie_perturb") = false,
     "Full tiling: per-component rectangles, cone points, doubled invariants");
}
