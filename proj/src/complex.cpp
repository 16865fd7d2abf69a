#include "harmtile/complex.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace harmtile {

namespace {
double polygonArea(const std::vector<Vec2>& pts) {
  double a = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % pts.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}
}  // namespace

int CellComplex::internalId(VId id) const {
  auto it = extToInt_.find(id);
  if (it == extToInt_.end())
    throw UnknownVertex("no vertex with id " + std::to_string(id));
  return it->second;
}

int CellComplex::edgeBetween(int u, int v) const {
  auto it = edgeIndex_.find({std::min(u, v), std::max(u, v)});
  return it == edgeIndex_.end() ? -1 : it->second;
}

CellComplex CellComplex::build(const RawComplex& raw, Validate level) {
  CellComplex cx;
  cx.graphOnly_ = (level == Validate::GraphOnly);

  if (raw.vertices.empty()) throw ValidationError("complex has no vertices");
  for (const auto& rv : raw.vertices) {
    if (cx.extToInt_.count(rv.id))
      throw ValidationError("duplicate vertex id " + std::to_string(rv.id));
    if (!std::isfinite(rv.x) || !std::isfinite(rv.y))
      throw ValidationError("non-finite coordinate on vertex " + std::to_string(rv.id));
    cx.extToInt_[rv.id] = cx.numVertices();
    cx.extId_.push_back(rv.id);
    cx.pos_.push_back({rv.x, rv.y});
  }

  for (const auto& re : raw.edges) {
    int u = cx.internalId(re.u), v = cx.internalId(re.v);
    if (u == v) throw ValidationError("self-loop at vertex " + std::to_string(re.u));
    if (!(re.c > 0) || !std::isfinite(re.c))
      throw ValidationError("conductance must be positive and finite on edge (" +
                            std::to_string(re.u) + "," + std::to_string(re.v) + ")");
    auto key = std::make_pair(std::min(u, v), std::max(u, v));
    if (cx.edgeIndex_.count(key))
      throw ValidationError("duplicate edge (" + std::to_string(re.u) + "," +
                            std::to_string(re.v) + ")");
    cx.edgeIndex_[key] = cx.numEdges();
    cx.edges_.push_back({u, v, re.c});
  }
  if (cx.edges_.empty()) throw ValidationError("complex has no edges");

  for (const auto& rc : raw.cells) {
    std::vector<int> cell;
    cell.reserve(rc.size());
    for (VId id : rc) cell.push_back(cx.internalId(id));
    cx.cells_.push_back(std::move(cell));
  }

  cx.buildAdjacency();

  // connectivity
  {
    std::vector<int> seen(cx.numVertices(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [e, w] : cx.incident_[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    if (count != cx.numVertices()) throw ValidationError("network is not connected");
  }

  if (level == Validate::Full) {
    if (cx.cells_.empty()) throw ValidationError("complex has no cells");
    cx.validateCells();
    cx.deriveBoundary(raw);
    cx.buildStars();
    cx.triangulate();
  } else {
    cx.boundaryFlag_.assign(cx.numVertices(), false);
    cx.loopOf_.assign(cx.numVertices(), -1);
    cx.star_.assign(cx.numVertices(), {});
    for (int v = 0; v < cx.numVertices(); ++v)
      for (auto [e, w] : cx.incident_[v]) cx.star_[v].push_back(w);
  }
  return cx;
}

void CellComplex::buildAdjacency() {
  incident_.assign(numVertices(), {});
  for (int e = 0; e < numEdges(); ++e) {
    incident_[edges_[e].u].push_back({e, edges_[e].v});
    incident_[edges_[e].v].push_back({e, edges_[e].u});
  }
}

void CellComplex::validateCells() {
  edgeCells_.assign(numEdges(), {});
  for (int ci = 0; ci < numCells(); ++ci) {
    const auto& cell = cells_[ci];
    if (cell.size() != 3 && cell.size() != 4)
      throw ValidationError("cell " + std::to_string(ci) + " has " +
                            std::to_string(cell.size()) + " vertices (want 3 or 4)");
    std::set<int> uniq(cell.begin(), cell.end());
    if (uniq.size() != cell.size())
      throw ValidationError("cell " + std::to_string(ci) + " repeats a vertex");
    std::vector<Vec2> pts;
    for (int v : cell) pts.push_back(pos_[v]);
    if (!(polygonArea(pts) > 0))
      throw ValidationError("cell " + std::to_string(ci) +
                            " is not counterclockwise / has nonpositive area");
    // strict convexity keeps the affine extension and tracing well-posed
    for (size_t i = 0; i < cell.size(); ++i) {
      Vec2 a = pts[i], b = pts[(i + 1) % cell.size()], c = pts[(i + 2) % cell.size()];
      if (!(cross(b - a, c - b) > 0))
        throw ValidationError("cell " + std::to_string(ci) + " is not strictly convex");
    }
    for (size_t i = 0; i < cell.size(); ++i) {
      int u = cell[i], v = cell[(i + 1) % cell.size()];
      int e = edgeBetween(u, v);
      if (e < 0)
        throw ValidationError("cell " + std::to_string(ci) + " side (" +
                              std::to_string(extId_[u]) + "," + std::to_string(extId_[v]) +
                              ") is not an edge");
      edgeCells_[e].push_back(ci);
    }
  }
  for (int e = 0; e < numEdges(); ++e) {
    size_t n = edgeCells_[e].size();
    if (n < 1 || n > 2)
      throw ValidationError("edge (" + std::to_string(extId_[edges_[e].u]) + "," +
                            std::to_string(extId_[edges_[e].v]) + ") lies in " +
                            std::to_string(n) + " cells (want 1 or 2)");
  }
}

void CellComplex::deriveBoundary(const RawComplex& raw) {
  // boundary edges = edges in exactly one cell; assemble loops
  std::map<int, std::vector<int>> succ;  // boundary adjacency
  int nBoundaryEdges = 0;
  for (int e = 0; e < numEdges(); ++e) {
    if (edgeCells_[e].size() != 1) continue;
    ++nBoundaryEdges;
    succ[edges_[e].u].push_back(edges_[e].v);
    succ[edges_[e].v].push_back(edges_[e].u);
  }
  if (nBoundaryEdges == 0) throw ValidationError("complex has no boundary");
  for (auto& [v, ns] : succ)
    if (ns.size() != 2)
      throw ValidationError("non-manifold boundary at vertex " +
                            std::to_string(extId_[v]));

  std::vector<std::vector<int>> loops;
  std::set<int> used;
  for (auto& [start, ns] : succ) {
    if (used.count(start)) continue;
    std::vector<int> loop{start};
    used.insert(start);
    int prev = start, cur = ns[0];
    while (cur != start) {
      loop.push_back(cur);
      used.insert(cur);
      auto& nn = succ[cur];
      int nxt = (nn[0] == prev) ? nn[1] : nn[0];
      prev = cur;
      cur = nxt;
    }
    loops.push_back(std::move(loop));
  }

  // orient: outer loop CCW (positive area), holes CW (region on the left),
  // outermost (largest |area|) first
  std::vector<std::pair<double, std::vector<int>>> byArea;
  for (auto& loop : loops) {
    std::vector<Vec2> pts;
    for (int v : loop) pts.push_back(pos_[v]);
    byArea.push_back({polygonArea(pts), loop});
  }
  std::sort(byArea.begin(), byArea.end(), [](const auto& a, const auto& b) {
    return std::abs(a.first) > std::abs(b.first);
  });
  loops_.clear();
  for (size_t i = 0; i < byArea.size(); ++i) {
    auto [area, loop] = byArea[i];
    bool wantCCW = (i == 0);
    if ((area > 0) != wantCCW) std::reverse(loop.begin(), loop.end());
    loops_.push_back(loop);
  }

  if (!raw.boundaryLoops.empty()) {
    // declared loops must match derived ones as cyclic vertex sets
    if (raw.boundaryLoops.size() != loops_.size())
      throw ValidationError("declared boundary loop count does not match the complex");
    std::vector<std::set<int>> derived;
    for (auto& l : loops_) derived.emplace_back(l.begin(), l.end());
    for (auto& dl : raw.boundaryLoops) {
      std::set<int> s;
      for (VId id : dl) s.insert(internalId(id));
      if (std::find(derived.begin(), derived.end(), s) == derived.end())
        throw ValidationError("declared boundary loop does not match any derived loop");
    }
  }

  boundaryFlag_.assign(numVertices(), false);
  loopOf_.assign(numVertices(), -1);
  for (size_t li = 0; li < loops_.size(); ++li)
    for (int v : loops_[li]) {
      boundaryFlag_[v] = true;
      loopOf_[v] = static_cast<int>(li);
    }
}

void CellComplex::buildStars() {
  star_.assign(numVertices(), {});
  for (int v = 0; v < numVertices(); ++v) {
    std::vector<std::pair<double, int>> ang;
    for (auto [e, w] : incident_[v]) {
      Vec2 d = pos_[w] - pos_[v];
      ang.push_back({std::atan2(d.y, d.x), w});
    }
    std::sort(ang.begin(), ang.end());
    std::vector<int> ccw;
    for (auto& [a, w] : ang) ccw.push_back(w);

    if (boundaryFlag_[v]) {
      // rotate so the fan starts at the outgoing boundary neighbor and ends
      // at the incoming one (open fan through the region)
      const auto& loop = loops_[loopOf_[v]];
      int n = static_cast<int>(loop.size());
      int pos = static_cast<int>(std::find(loop.begin(), loop.end(), v) - loop.begin());
      int next = loop[(pos + 1) % n];   // outgoing along CCW-region orientation
      int prev = loop[(pos - 1 + n) % n];
      auto it = std::find(ccw.begin(), ccw.end(), next);
      if (it == ccw.end())
        throw ValidationError("boundary loop neighbor missing from star");
      std::rotate(ccw.begin(), it, ccw.end());
      if (ccw.back() != prev)
        throw ValidationError(
            "rotation system inconsistent with boundary orientation at vertex " +
            std::to_string(extId_[v]));
    }
    star_[v] = std::move(ccw);
  }

  // rotation-system consistency: at each corner (prev, v, next) of a CCW
  // cell, prev must immediately follow next in the CCW star of v
  for (int ci = 0; ci < numCells(); ++ci) {
    const auto& cell = cells_[ci];
    int n = static_cast<int>(cell.size());
    for (int i = 0; i < n; ++i) {
      int v = cell[i], nxt = cell[(i + 1) % n], prv = cell[(i - 1 + n) % n];
      const auto& st = star_[v];
      int m = static_cast<int>(st.size());
      int j = static_cast<int>(std::find(st.begin(), st.end(), nxt) - st.begin());
      if (j == m) throw ValidationError("cell corner not in vertex star");
      int after = st[(j + 1) % m];
      bool ok = (after == prv);
      if (boundaryFlag_[v] && j == m - 1) ok = false;  // open fan cannot wrap
      if (!ok)
        throw ValidationError("cells overlap around vertex " +
                              std::to_string(extId_[v]) +
                              " (rotation system inconsistent)");
    }
  }
}

void CellComplex::triangulate() {
  tris_.clear();
  for (int ci = 0; ci < numCells(); ++ci) {
    const auto& cell = cells_[ci];
    if (cell.size() == 3) {
      tris_.push_back({cell[0], cell[1], cell[2], ci, false, false, false});
    } else {
      // split along the diagonal from the lowest-internal-id corner
      int lo = 0;
      for (int i = 1; i < 4; ++i)
        if (cell[i] < cell[lo]) lo = i;
      int a = cell[lo], b = cell[(lo + 1) % 4], c = cell[(lo + 2) % 4],
          d = cell[(lo + 3) % 4];
      tris_.push_back({a, b, c, ci, false, false, true});   // diag c-a
      tris_.push_back({a, c, d, ci, true, false, false});   // diag a-c
    }
  }
}

int CellComplex::eulerCharacteristic() const {
  return numVertices() - numEdges() + numCells();
}

int BoundarySpec::arcEndpointCount() const {
  int proper = 0;
  for (const auto& run : constantRuns)
    if (!run.closed) ++proper;
  return 2 * proper;
}

BoundarySpec deriveBoundarySpec(const CellComplex& cx, const RawComplex& raw) {
  BoundarySpec bs;
  bs.k = raw.k;
  if (!(bs.k > 0) || !std::isfinite(bs.k))
    throw ValidationError("k must be positive and finite");
  const auto& loops = cx.boundaryLoops();
  bool singleLoop = loops.size() == 1;

  auto checkArc = [&](const std::vector<VId>& ids, bool wantOuter) {
    if (ids.empty()) throw ValidationError("empty boundary arc");
    std::vector<int> arc;
    for (VId id : ids) arc.push_back(cx.internalId(id));
    for (int v : arc)
      if (!cx.isBoundary(v))
        throw NotBoundary("arc vertex " + std::to_string(cx.externalId(v)) +
                          " is not on the boundary");
    int loop = cx.loopOf(arc[0]);
    for (int v : arc)
      if (cx.loopOf(v) != loop)
        throw BadSubset("arc crosses boundary loops");
    if (wantOuter && loop != 0)
      throw BadSubset("alpha arc must lie on the outer loop");
    // contiguity along the loop (allow either direction, and full circles)
    const auto& lp = loops[loop];
    int n = static_cast<int>(lp.size());
    if (static_cast<int>(arc.size()) > n)
      throw BadSubset("arc longer than its loop");
    if (static_cast<int>(arc.size()) < n || arc.size() == 1) {
      auto posIn = [&](int v) {
        return static_cast<int>(std::find(lp.begin(), lp.end(), v) - lp.begin());
      };
      int p0 = posIn(arc[0]);
      if (p0 == n) throw BadSubset("arc vertex not on loop");
      int dir = 0;
      if (arc.size() > 1) {
        if (lp[(p0 + 1) % n] == arc[1]) dir = 1;
        else if (lp[(p0 - 1 + n) % n] == arc[1]) dir = -1;
        else throw BadSubset("arc is not a contiguous boundary path");
      }
      for (size_t i = 1; i < arc.size(); ++i)
        if (lp[((p0 + dir * static_cast<int>(i)) % n + n) % n] != arc[i])
          throw BadSubset("arc is not a contiguous boundary path");
    } else {
      // closed circle: require it to enumerate the loop exactly once
      std::set<int> s(arc.begin(), arc.end());
      if (s.size() != arc.size() || s != std::set<int>(lp.begin(), lp.end()))
        throw BadSubset("closed arc must enumerate its loop once");
    }
    return arc;
  };

  if (raw.alphaArcs.empty())
    throw ValidationError("at least one alpha arc is required");
  for (const auto& a : raw.alphaArcs) bs.alphaArcs.push_back(checkArc(a, true));
  for (const auto& b : raw.betaArcs) bs.betaArcs.push_back(checkArc(b, false));

  bs.role.assign(cx.numVertices(), Role::Interior);
  for (int li = 0; li < static_cast<int>(loops.size()); ++li)
    for (int v : loops[li])
      bs.role[v] = (li == 0 && !singleLoop) ? Role::Neumann : Role::Dirichlet0;
  if (singleLoop)
    for (int v : loops[0]) bs.role[v] = Role::Dirichlet0;

  std::vector<bool> claimed(cx.numVertices(), false);
  auto assign = [&](const std::vector<int>& arc, Role r) {
    for (int v : arc) {
      if (claimed[v])
        throw BadSubset("boundary arcs overlap at vertex " +
                        std::to_string(cx.externalId(v)));
      claimed[v] = true;
      bs.role[v] = r;
    }
  };
  for (const auto& b : bs.betaArcs) assign(b, Role::Neumann);
  for (const auto& a : bs.alphaArcs) assign(a, Role::DirichletK);

  bool anyGround = false;
  for (int v = 0; v < cx.numVertices(); ++v)
    if (bs.role[v] == Role::Dirichlet0) anyGround = true;
  if (!anyGround)
    throw ValidationError("no Dirichlet-0 vertex (system would be unsolvable)");

  // maximal constant runs along each loop
  for (const auto& lp : loops) {
    int n = static_cast<int>(lp.size());
    auto isConst = [&](int i) {
      Role r = bs.role[lp[i]];
      return r == Role::DirichletK || r == Role::Dirichlet0;
    };
    auto sameRun = [&](int i, int j) {
      return isConst(i) && isConst(j) && bs.role[lp[i]] == bs.role[lp[j]];
    };
    bool allConst = true;
    for (int i = 0; i < n; ++i)
      if (!isConst(i) || bs.role[lp[i]] != bs.role[lp[0]]) allConst = false;
    if (allConst) {
      BoundarySpec::ConstantRun run;
      run.verts = lp;
      run.role = bs.role[lp[0]];
      run.closed = true;
      bs.constantRuns.push_back(run);
      continue;
    }
    // find a run start: a constant vertex whose predecessor is not in-run
    for (int i = 0; i < n; ++i) {
      if (!isConst(i) || sameRun((i - 1 + n) % n, i)) continue;
      BoundarySpec::ConstantRun run;
      run.role = bs.role[lp[i]];
      int j = i;
      while (true) {
        run.verts.push_back(lp[j]);
        int jn = (j + 1) % n;
        if (!sameRun(j, jn)) break;
        j = jn;
        if (j == i) break;
      }
      bs.constantRuns.push_back(std::move(run));
    }
  }
  return bs;
}

}  // namespace harmtile
