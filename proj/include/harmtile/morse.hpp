#pragma once

#include <map>
#include <vector>

#include "harmtile/complex.hpp"
#include "harmtile/refine.hpp"

namespace harmtile {

// Sign-change counts, vertex indices and the boundary index identity,
// plus level-curve tracing on a refined complex.

struct VertexIndexEntry {
  int sgc = 0;
  double index = 0;  // half-integers, exact in binary
};

struct IndexReport {
  std::map<VId, VertexIndexEntry> perVertex;  // interior + Neumann vertices
  std::vector<VId> interiorSingular;
  std::vector<VId> boundarySingular;
  double totalIndex = 0;
  int arcEndpointCount = 0;  // t: endpoints of proper constant arcs
  double expected = 0;       // chi - t/4
  bool perturbed = false;
};

// one traced chain at a fixed level; nodes are refined-vertex ids
struct CurveComponent {
  double value = 0;
  std::vector<int> nodes;
  std::vector<Vec2> points;
  bool closed = false;
  std::vector<int> singular;
};

struct LevelCurve {
  double value = 0;
  std::vector<CurveComponent> components;
  std::vector<int> singularVertices;
};

enum class CurveSide { Below, Above };

// Number of strict sign changes of g(w)-g(v) around the star of v.
// Interior stars wrap around; boundary fans are open. A neighbour value
// within tol of g(v) is a tie: hard error unless tiePerturb, which breaks
// it by vertex id (g itself is never modified).
int signChanges(const CellComplex& cx, const std::vector<double>& g, int v,
                double tol, bool tiePerturb = false);

// 1 - sgc/2 at interior vertices, (1 - sgc)/2 on the boundary
double vertexIndex(const CellComplex& cx, const std::vector<double>& g, int v,
                   double tol, bool tiePerturb = false);

// Sums indices over every vertex not lying on a constant boundary arc or
// circle and checks the total against chi - t/4 exactly.
IndexReport indexFormulaCheck(const CellComplex& cx, const BoundarySpec& bs,
                              const std::vector<double>& g,
                              bool tiePerturb = false);

// Chains the level-s chords of the refined complex into trail components.
// s must be one of the refinement levels.
LevelCurve traceLevelCurve(const RefinedComplex& rc, double s);

// Flux-gradient length of one component, measured from the chosen side:
// sum over its nodes of the one-sided star flux. Also accepts hand-built
// components lying on a constant boundary arc, where only one side exists.
double fluxLength(const RefinedComplex& rc, const CurveComponent& comp,
                  CurveSide side);

}  // namespace harmtile
