#include "harmtile/refine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace harmtile {
namespace {

// sign of (value - level) with a dead zone
int sig(double v, double s, double tol) {
  if (std::abs(v - s) <= tol) return 0;
  return v < s ? -1 : 1;
}

// working polygon during clipping: sides[i] joins nodes[i] -> nodes[i+1 mod n]
struct WPoly {
  std::vector<int> nodes;
  std::vector<Side> sides;
};

}  // namespace

double RefinedComplex::bandLo(int band) const {
  return band == 0 ? 0.0 : levels_[band - 1];
}
double RefinedComplex::bandHi(int band) const {
  return band == static_cast<int>(levels_.size()) ? k_ : levels_[band];
}

int RefinedComplex::vertexAtEdgeLevel(int e, int levelIx) const {
  auto it = typeI_.find({e, levelIx});
  return it == typeI_.end() ? -1 : it->second;
}

bool RefinedComplex::atLevel(int rv, int levelIx) const {
  return std::abs(verts_[rv].g - levels_[levelIx]) <= tol_;
}

RefinedComplex RefinedComplex::build(const CellComplex& cx,
                                     const BoundarySpec& bs,
                                     const std::vector<double>& g,
                                     std::vector<double> cutLevels,
                                     std::vector<std::pair<int, double>> splits) {
  RefinedComplex rc;
  rc.base_ = cx;
  rc.bs_ = bs;
  rc.g_ = g;
  rc.k_ = bs.k;
  rc.tol_ = 1e-9 * std::max(bs.k, 1e-30);

  std::sort(cutLevels.begin(), cutLevels.end());
  std::vector<double> lv;
  for (double s : cutLevels) {
    if (s <= rc.tol_ || s >= rc.k_ - rc.tol_) continue;  // 0 and k never cut
    if (!lv.empty() && std::abs(s - lv.back()) <= rc.tol_) continue;
    lv.push_back(s);
  }
  rc.levels_ = std::move(lv);
  rc.splits_ = std::move(splits);

  rc.insertVertices();
  rc.buildSegments();
  rc.buildLifted();
  return rc;
}

void RefinedComplex::insertVertices() {
  const int n = base_.numVertices();
  verts_.reserve(n);
  for (int v = 0; v < n; ++v) {
    RefinedVertex rv;
    rv.kind = RVKind::Original;
    rv.g = g_[v];
    rv.pos = base_.position(v);
    rv.orig = v;
    verts_.push_back(rv);
  }

  // a cut level running along an edge would make the level set fat
  for (int e = 0; e < base_.numEdges(); ++e) {
    const Edge& ed = base_.edge(e);
    for (int ix = 0; ix < static_cast<int>(levels_.size()); ++ix) {
      double s = levels_[ix];
      if (std::abs(g_[ed.u] - s) <= tol_ && std::abs(g_[ed.v] - s) <= tol_)
        throw DegenerateLevel("level " + std::to_string(s) +
                              " runs along edge " + std::to_string(e));
    }
  }

  // type I: transversal edge/level crossings
  for (int e = 0; e < base_.numEdges(); ++e) {
    const Edge& ed = base_.edge(e);
    double gu = g_[ed.u], gv = g_[ed.v];
    for (int ix = 0; ix < static_cast<int>(levels_.size()); ++ix) {
      double s = levels_[ix];
      if (sig(gu, s, tol_) * sig(gv, s, tol_) >= 0) continue;
      RefinedVertex rv;
      rv.kind = RVKind::TypeI;
      rv.g = s;
      rv.hostEdge = e;
      rv.t = (s - gu) / (gv - gu);
      rv.pos = base_.position(ed.u) +
               rv.t * (base_.position(ed.v) - base_.position(ed.u));
      rv.level = ix;
      typeI_[{e, ix}] = static_cast<int>(verts_.size());
      verts_.push_back(rv);
      ++nTypeI_;
    }
  }

  // type II: explicit parameter splits
  for (auto [e, t] : splits_) {
    const Edge& ed = base_.edge(e);
    bool dup = false;
    for (const auto& rv : verts_)
      if (rv.kind != RVKind::Original && rv.hostEdge == e &&
          std::abs(rv.t - t) < 1e-12)
        dup = true;
    if (dup || t <= 0 || t >= 1) continue;
    RefinedVertex rv;
    rv.kind = RVKind::TypeII;
    rv.g = g_[ed.u] + t * (g_[ed.v] - g_[ed.u]);
    rv.hostEdge = e;
    rv.t = t;
    rv.pos = base_.position(ed.u) +
             t * (base_.position(ed.v) - base_.position(ed.u));
    verts_.push_back(rv);
    ++nTypeII_;
  }

  bdFlag_.assign(verts_.size(), false);
  for (int v = 0; v < static_cast<int>(verts_.size()); ++v) {
    const RefinedVertex& rv = verts_[v];
    if (rv.kind == RVKind::Original)
      bdFlag_[v] = base_.isBoundary(rv.orig);
    else if (rv.kind != RVKind::Diagonal)
      bdFlag_[v] = base_.edgeCells()[rv.hostEdge].size() == 1;
  }
}

void RefinedComplex::buildSegments() {
  edgeSegs_.assign(base_.numEdges(), {});
  std::vector<std::vector<std::pair<double, int>>> onEdge(base_.numEdges());
  for (int v = 0; v < static_cast<int>(verts_.size()); ++v) {
    const RefinedVertex& rv = verts_[v];
    if (rv.kind == RVKind::TypeI || rv.kind == RVKind::TypeII)
      onEdge[rv.hostEdge].push_back({rv.t, v});
  }
  for (int e = 0; e < base_.numEdges(); ++e) {
    const Edge& ed = base_.edge(e);
    auto& pts = onEdge[e];
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, int>> chain;
    chain.push_back({0.0, ed.u});
    chain.insert(chain.end(), pts.begin(), pts.end());
    chain.push_back({1.0, ed.v});
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
      Seg s;
      s.a = chain[i].second;
      s.b = chain[i + 1].second;
      s.hostEdge = e;
      s.c = ed.c / (chain[i + 1].first - chain[i].first);
      edgeSegs_[e].push_back(static_cast<int>(segs_.size()));
      segs_.push_back(s);
    }
  }
  segAdj_.assign(verts_.size(), {});
  for (int s = 0; s < static_cast<int>(segs_.size()); ++s) {
    segAdj_[segs_[s].a].push_back({s, segs_[s].b});
    segAdj_[segs_[s].b].push_back({s, segs_[s].a});
  }
}

namespace {

double paramOnEdge(const RefinedVertex& rv, const Edge& ed) {
  if (rv.kind == RVKind::Original) return rv.orig == ed.u ? 0.0 : 1.0;
  return rv.t;
}

}  // namespace

void RefinedComplex::buildLifted() {
  const int L = static_cast<int>(levels_.size());

  auto diagNode = [&](int cell, int ix, int na, int nb) {
    auto it = diag_.find({cell, ix});
    if (it != diag_.end()) return it->second;
    double s = levels_[ix];
    const RefinedVertex& a = verts_[na];
    const RefinedVertex& b = verts_[nb];
    double t = (s - a.g) / (b.g - a.g);
    RefinedVertex rv;
    rv.kind = RVKind::Diagonal;
    rv.g = s;
    rv.pos = a.pos + t * (b.pos - a.pos);
    rv.hostCell = cell;
    rv.level = ix;
    int id = static_cast<int>(verts_.size());
    verts_.push_back(rv);
    segAdj_.push_back({});
    bdFlag_.push_back(false);
    diag_[{cell, ix}] = id;
    return id;
  };

  // crossing node of a (possibly already clipped) side at level ix
  auto crossNode = [&](const Side& sd, int ix) {
    if (sd.kind == SideKind::Edge) {
      int v = vertexAtEdgeLevel(sd.host, ix);
      if (v < 0)
        throw ValidationError("internal: missing type I vertex on edge " +
                              std::to_string(sd.host));
      return v;
    }
    return diagNode(sd.host, ix, sd.a, sd.b);
  };

  auto splitPoly = [&](const WPoly& P, int ix, WPoly& below, WPoly& above) {
    double s = levels_[ix];
    const int n = static_cast<int>(P.nodes.size());
    auto pushSide = [](WPoly& W, Side sd, int a, int b) {
      sd.a = a;
      sd.b = b;
      W.sides.push_back(sd);
    };
    // build each part's node list with interleaved sides; -1 side slots are
    // resolved to level chords afterwards
    struct PartBuilder {
      WPoly poly;
      bool pendingChord = false;
      void node(int v) {
        if (!poly.nodes.empty() && poly.nodes.back() == v) return;
        if (pendingChord && !poly.nodes.empty()) {
          Side ch;
          ch.kind = SideKind::Chord;
          ch.a = poly.nodes.back();
          ch.b = v;
          poly.sides.push_back(ch);
          pendingChord = false;
        }
        poly.nodes.push_back(v);
      }
      void side(const Side& sd, int a, int b) {
        Side s2 = sd;
        s2.a = a;
        s2.b = b;
        poly.sides.push_back(s2);
      }
    };
    PartBuilder lo, hi;
    for (int i = 0; i < n; ++i) {
      int A = P.nodes[i], B = P.nodes[(i + 1) % n];
      const Side& S = P.sides[i];
      int sa = sig(verts_[A].g, s, tol_);
      int sb = sig(verts_[B].g, s, tol_);
      if (sa == 0 && sb == 0)
        throw DegenerateLevel("level " + std::to_string(s) +
                              " runs along a cell side");
      if (sa <= 0) lo.node(A);
      if (sa >= 0) hi.node(A);
      if (sa * sb < 0) {
        int x = crossNode(S, ix);
        if (sa < 0) {
          lo.side(S, A, x);
          lo.node(x);
          lo.pendingChord = true;
          hi.node(x);
          hi.side(S, x, B);
        } else {
          hi.side(S, A, x);
          hi.node(x);
          hi.pendingChord = true;
          lo.node(x);
          lo.side(S, x, B);
        }
      } else {
        if (sa <= 0 && sb <= 0 && !(sa == 0 && sb == 0)) lo.side(S, A, B);
        if (sa >= 0 && sb >= 0 && !(sa == 0 && sb == 0)) hi.side(S, A, B);
        if (sa < 0 && sb == 0) { /* B joins both; chord starts there */
        }
        if (sa == 0 && sb > 0) lo.pendingChord = true;
        if (sa == 0 && sb < 0) hi.pendingChord = true;
      }
    }
    // wrap-around chord
    auto finish = [&](PartBuilder& pb, int chordIx) {
      if (pb.poly.nodes.size() != pb.poly.sides.size() &&
          pb.poly.nodes.size() >= 2) {
        Side ch;
        ch.kind = SideKind::Chord;
        ch.host = chordIx;
        ch.a = pb.poly.nodes.back();
        ch.b = pb.poly.nodes.front();
        pb.poly.sides.push_back(ch);
      }
      for (auto& sd : pb.poly.sides)
        if (sd.kind == SideKind::Chord && sd.host < 0) sd.host = chordIx;
    };
    finish(lo, ix);
    finish(hi, ix);
    below = std::move(lo.poly);
    above = std::move(hi.poly);
  };

  auto minMaxG = [&](const WPoly& P) {
    double mn = 1e300, mx = -1e300;
    for (int v : P.nodes) {
      mn = std::min(mn, verts_[v].g);
      mx = std::max(mx, verts_[v].g);
    }
    return std::pair<double, double>{mn, mx};
  };

  std::vector<std::pair<WPoly, int>> done;  // (poly, band)
  for (const auto& tri : base_.triangles()) {
    WPoly P;
    P.nodes = {tri.a, tri.b, tri.c};
    auto mkSide = [&](bool diagFlag, int va, int vb) {
      Side sd;
      if (diagFlag) {
        sd.kind = SideKind::Diag;
        sd.host = tri.cell;
      } else {
        sd.kind = SideKind::Edge;
        sd.host = base_.edgeBetween(va, vb);
      }
      sd.a = va;
      sd.b = vb;
      return sd;
    };
    P.sides = {mkSide(tri.diagAB, tri.a, tri.b),
               mkSide(tri.diagBC, tri.b, tri.c),
               mkSide(tri.diagCA, tri.c, tri.a)};

    std::vector<WPoly> active = {P};
    for (int ix = 0; ix < L; ++ix) {
      double s = levels_[ix];
      std::vector<WPoly> next;
      for (auto& Q : active) {
        auto [mn, mx] = minMaxG(Q);
        if (mx <= s + tol_) {
          done.push_back({std::move(Q), ix});
        } else if (mn >= s - tol_) {
          next.push_back(std::move(Q));
        } else {
          WPoly below, above;
          splitPoly(Q, ix, below, above);
          if (below.nodes.size() >= 3) done.push_back({std::move(below), ix});
          if (above.nodes.size() >= 3) next.push_back(std::move(above));
        }
      }
      active = std::move(next);
    }
    for (auto& Q : active)
      if (Q.nodes.size() >= 3) done.push_back({std::move(Q), L});

    for (auto& [Q, band] : done) {
      LiftedCell lc;
      lc.cell = tri.cell;
      lc.band = band;
      // expand Edge sides into per-segment sides
      const int m = static_cast<int>(Q.nodes.size());
      for (int i = 0; i < m; ++i) {
        const Side& sd = Q.sides[i];
        if (sd.kind != SideKind::Edge) {
          lc.sides.push_back(sd);
          continue;
        }
        int e = sd.host;
        const Edge& ed = base_.edge(e);
        double ta = paramOnEdge(verts_[sd.a], ed);
        double tb = paramOnEdge(verts_[sd.b], ed);
        bool fwd = ta < tb;
        double t0 = std::min(ta, tb), t1 = std::max(ta, tb);
        std::vector<int> segIds;
        for (int sIx : edgeSegs_[e]) {
          const Seg& sg = segs_[sIx];
          double sa = paramOnEdge(verts_[sg.a], ed);
          double sb2 = paramOnEdge(verts_[sg.b], ed);
          if (sa >= t0 - 1e-12 && sb2 <= t1 + 1e-12) segIds.push_back(sIx);
        }
        if (!fwd) std::reverse(segIds.begin(), segIds.end());
        for (int sIx : segIds) {
          Side piece;
          piece.kind = SideKind::Edge;
          piece.host = sIx;
          piece.a = fwd ? segs_[sIx].a : segs_[sIx].b;
          piece.b = fwd ? segs_[sIx].b : segs_[sIx].a;
          lc.sides.push_back(piece);
        }
      }
      lifted_.push_back(std::move(lc));
    }
    done.clear();
  }
}

RawComplex RefinedComplex::exportGraph() const {
  RawComplex raw;
  raw.k = bs_.k;
  VId nextId = 0;
  for (int v = 0; v < base_.numVertices(); ++v)
    nextId = std::max(nextId, base_.externalId(v) + 1);
  std::vector<VId> ext(verts_.size(), -1);
  for (int v = 0; v < static_cast<int>(verts_.size()); ++v) {
    const RefinedVertex& rv = verts_[v];
    if (rv.kind == RVKind::Diagonal) continue;  // no conductance there
    VId id = rv.kind == RVKind::Original ? base_.externalId(rv.orig) : nextId++;
    ext[v] = id;
    raw.vertices.push_back({id, rv.pos.x, rv.pos.y});
  }
  for (const Seg& s : segs_)
    raw.edges.push_back({ext[s.a], ext[s.b], s.c});
  return raw;
}

std::vector<double> RefinedComplex::extendedG() const {
  std::vector<double> out;
  for (const auto& rv : verts_)
    if (rv.kind != RVKind::Diagonal) out.push_back(rv.g);
  return out;
}

double affineValueAt(const CellComplex& cx, const std::vector<double>& g,
                     Vec2 p) {
  for (const auto& tri : cx.triangles()) {
    Vec2 a = cx.position(tri.a), b = cx.position(tri.b), c = cx.position(tri.c);
    double area = cross(b - a, c - a);
    if (area <= 0) continue;
    double wa = cross(b - p, c - p) / area;
    double wb = cross(c - p, a - p) / area;
    double wc = cross(a - p, b - p) / area;
    double eps = -1e-12;
    if (wa >= eps && wb >= eps && wc >= eps)
      return wa * g[tri.a] + wb * g[tri.b] + wc * g[tri.c];
  }
  throw OutsideComplex("point (" + std::to_string(p.x) + ", " +
                       std::to_string(p.y) + ") lies in no cell");
}

RefinedComplex refineAtLevels(const CellComplex& cx, const BoundarySpec& bs,
                              const std::vector<double>& g,
                              const std::vector<double>& cutLevels) {
  return RefinedComplex::build(cx, bs, g, cutLevels);
}

RefinedComplex insertLevelVertices(const RefinedComplex& rc, double s) {
  std::vector<double> lv = rc.levels();
  lv.push_back(s);  // build() drops 0/k and duplicates
  return RefinedComplex::build(rc.base(), rc.boundary(), rc.baseG(), lv,
                               rc.splits());
}

RefinedComplex padCombinatorialDistance(const RefinedComplex& rc,
                                        std::vector<double> levels) {
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end(),
                           [&](double a, double b) {
                             return std::abs(a - b) <= rc.valueTol();
                           }),
               levels.end());
  auto levelOf = [&](double v) {
    for (int j = 0; j < static_cast<int>(levels.size()); ++j)
      if (std::abs(v - levels[j]) <= rc.valueTol()) return j;
    return -1;
  };
  std::vector<std::pair<int, double>> splits = rc.splits();
  const CellComplex& cx = rc.base();
  for (const Seg& s : rc.segs()) {
    int la = levelOf(rc.gAt(s.a));
    int lb = levelOf(rc.gAt(s.b));
    if (la < 0 || lb < 0 || std::abs(la - lb) != 1) continue;
    const Edge& ed = cx.edge(s.hostEdge);
    double ta = paramOnEdge(rc.verts()[s.a], ed);
    double tb = paramOnEdge(rc.verts()[s.b], ed);
    splits.push_back({s.hostEdge, (ta + tb) / 2});
  }
  return RefinedComplex::build(cx, rc.boundary(), rc.baseG(), rc.levels(),
                               std::move(splits));
}

RefinedComplex subdivideEdge(const RefinedComplex& rc, int edge, double t) {
  auto splits = rc.splits();
  splits.push_back({edge, t});
  return RefinedComplex::build(rc.base(), rc.boundary(), rc.baseG(),
                               rc.levels(), std::move(splits));
}

}  // namespace harmtile
