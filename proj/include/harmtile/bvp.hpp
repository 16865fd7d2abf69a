#pragma once
#include <map>
#include <vector>

#include "harmtile/complex.hpp"

namespace harmtile {

// Solved potential on a complex.
struct Potential {
  std::vector<double> g;     // per internal vertex
  double residualNorm = 0;   // max |laplacian| over free vertices
};

struct FluxReport {
  std::map<VId, double> perVertex;  // boundary vertices only
  double total = 0;
  std::vector<double> alphaTotals;
  std::vector<double> groundTotals;  // one per ground constant run
  std::vector<double> betaTotals;
};

// Weighted graph laplacian at v: sum_c(v,y) (u(v) - u(y)) over all neighbors.
double laplacianAt(const CellComplex& cx, const std::vector<double>& u, int v);

// Solve the mixed problem: g = k on alpha vertices, g = 0 on ground vertices,
// full-star harmonicity at interior and Neumann vertices.
Potential solveDNBVP(const CellComplex& cx, const BoundarySpec& bs,
                     double tolRel = 1e-12);

// Per-vertex flux sum_{y} c(x,y)(g(x)-g(y)) over the given boundary vertices.
// (Edges inside a constant arc carry zero drop, so this matches the
// far-endpoint-outside-the-arc convention on solved systems.)
std::vector<double> normalDerivative(const CellComplex& cx,
                                     const std::vector<double>& g,
                                     const std::vector<int>& arc);

double dirichletEnergy(const CellComplex& cx, const std::vector<double>& u);

// First Green identity residual |LHS - RHS| for vertex set F:
//   LHS = sum over edges meeting F of c (u(x)-u(y))(v(x)-v(y))
//   RHS = sum_{x in F} lap u(x) v(x) + sum_{x in dF} dn u(F)(x) v(x)
double greenIdentityResidual(const CellComplex& cx, const std::vector<int>& F,
                             const std::vector<double>& u,
                             const std::vector<double>& v);

FluxReport checkConsistency(const CellComplex& cx, const BoundarySpec& bs,
                            const Potential& pot);

// Max-principle check: throws ConsistencyViolation when any value leaves
// [0,k] (beyond slack) or a free vertex is a strict local extremum.
void checkMaxPrinciple(const CellComplex& cx, const BoundarySpec& bs,
                       const std::vector<double>& g, double slack = 1e-12);

}  // namespace harmtile
