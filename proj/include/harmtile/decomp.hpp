#pragma once

#include <set>
#include <utility>
#include <vector>

#include "harmtile/morse.hpp"
#include "harmtile/refine.hpp"

namespace harmtile {

// Slicing along singular levels into classified components, plus the
// geometric gluing check across cut levels.

enum class CompKind { Quadrilateral, SlicedQuadrilateral, Annulus };

enum class DartRole { Level, Neumann };

struct Dart {
  int cell = -1;  // lifted cell index
  int side = -1;  // side index within that cell
  DartRole role = DartRole::Level;
};

struct Component {
  CompKind kind = CompKind::Quadrilateral;
  int band = -1;
  std::vector<int> cells;                        // lifted cell indices
  std::vector<std::vector<Dart>> loops;          // boundary walks, CCW
  int corners = 0;                               // Level<->Neumann transitions
  std::vector<std::pair<int, int>> identified;   // (refined vertex, visits>=2)
};

struct Subdomain {
  int index = 0;
  double lo = 0, hi = 0;
  std::vector<int> components;  // ids into Decomposition::components
};

struct Decomposition {
  RefinedComplex rc;
  std::vector<double> cuts;      // interior singular values, ascending
  std::vector<Subdomain> bands;
  std::vector<Component> components;
  std::vector<int> componentOf;  // lifted cell -> component id
  std::set<int> singularRv;      // refined ids of singular vertices
};

struct GluingEdge {
  double level = 0;
  int below = -1, above = -1;  // component ids
  double lengthBelow = 0, lengthAbove = 0;
  int pieces = 0;  // chord count along the seam
  bool closed = false;
};

// distinct singular-vertex values framed by 0 and k
std::vector<double> singularValues(const CellComplex& cx, const IndexReport& rep,
                                   const std::vector<double>& g, double k);

// index check -> refine at the interior singular values -> components.
// splits are optional type II subdivisions (edge, t) applied to the
// refinement, for the subdivision-invariance checks.
Decomposition decompose(const CellComplex& cx, const BoundarySpec& bs,
                        const std::vector<double>& g, bool tiePerturb = false,
                        std::vector<std::pair<int, double>> splits = {});

// pairs up chords across each cut level and measures both sides
std::vector<GluingEdge> verifyGluing(const Decomposition& dec,
                                     double tolRel = 1e-9);

}  // namespace harmtile
