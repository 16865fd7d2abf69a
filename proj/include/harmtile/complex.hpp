#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harmtile/errors.hpp"

namespace harmtile {

struct Vec2 {
  double x = 0, y = 0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// External vertex ids are arbitrary integers; internally vertices are dense
// indices 0..n-1 in input order.
using VId = std::int64_t;

struct RawVertex {
  VId id;
  double x, y;
};
struct RawEdge {
  VId u, v;
  double c;
};

// Raw parsed form of an input document, before validation/indexing.
struct RawComplex {
  std::vector<RawVertex> vertices;
  std::vector<RawEdge> edges;
  std::vector<std::vector<VId>> cells;
  std::vector<std::vector<VId>> boundaryLoops;  // optional: derived if empty
  // boundary conditions
  double k = 1.0;
  std::vector<std::vector<VId>> alphaArcs;
  std::vector<std::vector<VId>> betaArcs;
};

enum class Role : std::uint8_t { Interior, DirichletK, Dirichlet0, Neumann };

struct Edge {
  int u, v;    // internal indices, u < v not required (input order kept)
  double c;    // conductance > 0
};

// How much validation to run. Full enforces the 2-complex invariants;
// GraphOnly accepts bare networks (used by graph-level operations/tests).
enum class Validate { Full, GraphOnly };

class CellComplex {
 public:
  static CellComplex build(const RawComplex& raw, Validate level = Validate::Full);

  int numVertices() const { return static_cast<int>(pos_.size()); }
  int numEdges() const { return static_cast<int>(edges_.size()); }
  int numCells() const { return static_cast<int>(cells_.size()); }

  VId externalId(int v) const { return extId_[v]; }
  int internalId(VId id) const;
  Vec2 position(int v) const { return pos_[v]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<std::vector<int>>& boundaryLoops() const { return loops_; }

  bool isBoundary(int v) const { return boundaryFlag_[v]; }
  // Euler characteristic V - E + F of the 2-complex.
  int eulerCharacteristic() const;

  // Neighbors of v in counterclockwise angular order. For interior vertices
  // the order is cyclic (starting neighbor unspecified but deterministic);
  // for boundary vertices the list starts at the outgoing boundary neighbor
  // (next vertex along the CCW-ordered loop) and ends at the incoming one,
  // sweeping through the region. Also used as the fan for index counts.
  const std::vector<int>& vertexStar(int v) const { return star_[v]; }

  // Edge lookup; -1 if absent.
  int edgeBetween(int u, int v) const;
  const std::vector<std::pair<int, int>>& incidentEdges(int v) const {
    return incident_[v];  // (edge index, neighbor)
  }

  // loop membership: loopOf[v] = loop index or -1
  int loopOf(int v) const { return loopOf_[v]; }

  // Triangulation of cells: each quad is split along the diagonal from its
  // lowest-internal-id corner. Triangles are CCW; quadDiag marks which tri
  // edges are cell diagonals rather than network edges.
  struct Tri {
    int a, b, c;     // internal vertex ids, CCW
    int cell;        // owning cell index
    bool diagAB, diagBC, diagCA;  // true if that side is a quad diagonal
  };
  const std::vector<Tri>& triangles() const { return tris_; }

  // Boundary edges (edge indices lying in exactly one cell), and the cells
  // incident to each edge.
  const std::vector<std::vector<int>>& edgeCells() const { return edgeCells_; }

 private:
  std::vector<VId> extId_;
  std::map<VId, int> extToInt_;
  std::vector<Vec2> pos_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> cells_;
  std::vector<std::vector<int>> loops_;
  std::vector<bool> boundaryFlag_;
  std::vector<int> loopOf_;
  std::vector<std::vector<int>> star_;
  std::vector<std::vector<std::pair<int, int>>> incident_;
  std::map<std::pair<int, int>, int> edgeIndex_;
  std::vector<std::vector<int>> edgeCells_;
  std::vector<Tri> tris_;
  bool graphOnly_ = false;

  void buildAdjacency();
  void deriveBoundary(const RawComplex& raw);
  void buildStars();
  void validateCells();
  void triangulate();
};

// Boundary-condition assignment for the mixed problem.
struct BoundarySpec {
  double k = 1.0;
  std::vector<std::vector<int>> alphaArcs;  // internal indices, path order
  std::vector<std::vector<int>> betaArcs;
  std::vector<Role> role;                   // per internal vertex

  // Maximal constant-value boundary runs of the induced roles. Each run is a
  // path of consecutive same-role Dirichlet vertices along one loop; closed
  // runs cover a whole loop.
  struct ConstantRun {
    std::vector<int> verts;
    Role role;
    bool closed = false;
  };
  std::vector<ConstantRun> constantRuns;

  // t in the index identity: 2 x number of proper (non-closed) constant runs.
  int arcEndpointCount() const;
};

// Derive roles from declared arcs per the boundary conventions:
// alpha vertices -> k; beta vertices -> Neumann; remaining inner-loop
// vertices -> 0; remaining outer-loop vertices -> Neumann. A single-loop
// complex treats its loop as both outer and inner (remaining -> 0).
BoundarySpec deriveBoundarySpec(const CellComplex& cx, const RawComplex& raw);

}  // namespace harmtile
