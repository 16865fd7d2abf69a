#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "harmtile/bvp.hpp"
#include "harmtile/complex.hpp"

namespace harmtile {

enum class RVKind : std::uint8_t { Original, TypeI, TypeII, Diagonal };

struct RefinedVertex {
  RVKind kind = RVKind::Original;
  double g = 0;
  Vec2 pos;
  // provenance
  int orig = -1;      // Original: base internal id
  int hostEdge = -1;  // TypeI/TypeII: base edge index
  double t = 0;       // parameter along the host edge, from edge().u to .v
  int level = -1;     // TypeI/Diagonal: index into levels()
  int hostCell = -1;  // Diagonal: owning cell (crossing on a quad diagonal)
};

// Conductive sub-segment of an original edge. Conductances are chosen so each
// piece carries the original edge current: c_sub * drop_sub = c * drop, hence
// per-edge energy and all fluxes are preserved exactly.
struct Seg {
  int a = -1, b = -1;  // refined vertex ids, ordered from edge().u toward .v
  double c = 0;
  int hostEdge = -1;
};

enum class SideKind : std::uint8_t { Edge, Diag, Chord };

// One CCW side of a lifted cell. Edge sides correspond 1:1 with segments
// (host = segment index); Diag sides lie on a quad triangulation diagonal
// (host = cell index); Chord sides lie on a cut level (host = level index).
struct Side {
  int a = -1, b = -1;
  SideKind kind = SideKind::Edge;
  int host = -1;
};

// Convex piece of a triangulated cell clipped between consecutive cut levels.
struct LiftedCell {
  int cell = -1;
  int band = 0;  // vertex values lie in [bandLo(band), bandHi(band)]
  std::vector<Side> sides;  // CCW
};

// Immutable refinement of a solved complex: type I vertices at the cut
// levels, optional type II padding / explicit splits, per-edge sub-segments,
// and the cells subdivided by the level chords. Rebuilt from scratch for
// every modification (insertLevelVertices / padCombinatorialDistance return
// fresh instances).
class RefinedComplex {
 public:
  static RefinedComplex build(const CellComplex& cx, const BoundarySpec& bs,
                              const std::vector<double>& g,
                              std::vector<double> cutLevels,
                              std::vector<std::pair<int, double>> splits = {});

  const CellComplex& base() const { return base_; }
  const BoundarySpec& boundary() const { return bs_; }
  const std::vector<double>& baseG() const { return g_; }

  const std::vector<double>& levels() const { return levels_; }  // ascending
  int bandCount() const { return static_cast<int>(levels_.size()) + 1; }
  double bandLo(int band) const;
  double bandHi(int band) const;

  const std::vector<RefinedVertex>& verts() const { return verts_; }
  const std::vector<Seg>& segs() const { return segs_; }
  const std::vector<LiftedCell>& lifted() const { return lifted_; }

  double gAt(int rv) const { return verts_[rv].g; }
  Vec2 posAt(int rv) const { return verts_[rv].pos; }

  // Incident segments of a refined vertex: (segment index, other endpoint).
  const std::vector<std::pair<int, int>>& segsAt(int rv) const {
    return segAdj_[rv];
  }
  // Segments of an original edge, ordered from edge().u to .v.
  const std::vector<int>& segsOfEdge(int e) const { return edgeSegs_[e]; }

  // Type I vertex on edge e at cut level index, or -1.
  int vertexAtEdgeLevel(int e, int levelIx) const;
  int typeICount() const { return nTypeI_; }
  int typeIICount() const { return nTypeII_; }

  // True if the refined vertex lies on the domain boundary (original boundary
  // vertices and added vertices on boundary edges).
  bool onBoundary(int rv) const { return bdFlag_[rv]; }

  // Whether this vertex counts as lying on levels()[ix] (within tolerance).
  bool atLevel(int rv, int levelIx) const;

  // The refined network as a bare graph document (GraphOnly): original
  // vertices keep their external ids, added vertices get fresh ones. Used to
  // re-solve and confirm that the extended g is the harmonic solution.
  RawComplex exportGraph() const;
  // g on the exported graph, indexed like exportGraph().vertices.
  std::vector<double> extendedG() const;

  double valueTol() const { return tol_; }

  // parameters this instance was built from (rebuild bookkeeping)
  const std::vector<std::pair<int, double>>& splits() const { return splits_; }

 private:
  CellComplex base_;
  BoundarySpec bs_;
  std::vector<double> g_;
  std::vector<double> levels_;
  std::vector<std::pair<int, double>> splits_;  // (edge, t) type II points
  double k_ = 1, tol_ = 1e-9;

  std::vector<RefinedVertex> verts_;
  std::vector<Seg> segs_;
  std::vector<LiftedCell> lifted_;
  std::vector<std::vector<std::pair<int, int>>> segAdj_;
  std::vector<std::vector<int>> edgeSegs_;
  std::map<std::pair<int, int>, int> typeI_;  // (edge, levelIx) -> vertex
  std::map<std::pair<int, int>, int> diag_;   // (cell, levelIx) -> vertex
  std::vector<bool> bdFlag_;
  int nTypeI_ = 0, nTypeII_ = 0;

  void insertVertices();
  void buildSegments();
  void buildLifted();
};

// Piecewise-affine extension of g at an arbitrary point: barycentric on the
// triangulated cells (quads split along the diagonal from their lowest-id
// corner). Throws OutsideComplex for points in no cell.
double affineValueAt(const CellComplex& cx, const std::vector<double>& g,
                     Vec2 p);

// Refine at the given cut levels (each strictly inside (0,k); values hitting
// 0, k, or an existing vertex value insert nothing on the matching edges).
// Throws DegenerateLevel when a cut level runs along an interior edge.
RefinedComplex refineAtLevels(const CellComplex& cx, const BoundarySpec& bs,
                              const std::vector<double>& g,
                              const std::vector<double>& cutLevels);

// New complex with one more cut level (no-op when s is 0 or k).
RefinedComplex insertLevelVertices(const RefinedComplex& rc, double s);

// Insert type II vertices until consecutive level vertex sets (for the given
// descending level values) are at combinatorial distance >= 2. Returns the
// padded complex and reports how many vertices were added via typeIICount().
RefinedComplex padCombinatorialDistance(const RefinedComplex& rc,
                                        std::vector<double> levels);

// Split one segment-bearing edge at parameter t (type II vertex); used by the
// subdivision-invariance checks.
RefinedComplex subdivideEdge(const RefinedComplex& rc, int edge, double t);

}  // namespace harmtile
