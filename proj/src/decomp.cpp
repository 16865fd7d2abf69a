#include "harmtile/decomp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "harmtile/bvp.hpp"
#include "harmtile/errors.hpp"

namespace harmtile {

namespace {

// sides match up by provenance, not just endpoints: edge sides by segment,
// diag sides within their host cell, chords within their level
using SideKey = std::array<int, 4>;

SideKey keyOf(const Side& sd) {
  int a = std::min(sd.a, sd.b), b = std::max(sd.a, sd.b);
  switch (sd.kind) {
    case SideKind::Edge:
      return {0, sd.host, 0, 0};
    case SideKind::Diag:
      return {1, sd.host, a, b};
    default:
      return {2, sd.host, a, b};
  }
}

struct UF {
  std::vector<int> p;
  explicit UF(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

double belowSum(const RefinedComplex& rc, int node, double s) {
  double t = 0;
  for (const auto& [segIx, other] : rc.segsAt(node))
    if (rc.gAt(other) < s - rc.valueTol())
      t += rc.segs()[segIx].c * (s - rc.gAt(other));
  return t;
}

double aboveSum(const RefinedComplex& rc, int node, double s) {
  double t = 0;
  for (const auto& [segIx, other] : rc.segsAt(node))
    if (rc.gAt(other) > s + rc.valueTol())
      t += rc.segs()[segIx].c * (rc.gAt(other) - s);
  return t;
}

}  // namespace

std::vector<double> singularValues(const CellComplex& cx, const IndexReport& rep,
                                   const std::vector<double>& g, double k) {
  double tol = 1e-9 * k;
  std::vector<double> vals;
  for (VId v : rep.interiorSingular) vals.push_back(g[cx.internalId(v)]);
  for (VId v : rep.boundarySingular) vals.push_back(g[cx.internalId(v)]);
  std::sort(vals.begin(), vals.end());
  std::vector<double> out = {0.0};
  for (double v : vals)
    if (v > tol && v < k - tol && v - out.back() > tol) out.push_back(v);
  out.push_back(k);
  return out;
}

Decomposition decompose(const CellComplex& cx, const BoundarySpec& bs,
                        const std::vector<double>& g, bool tiePerturb,
                        std::vector<std::pair<int, double>> splits) {
  IndexReport rep = indexFormulaCheck(cx, bs, g, tiePerturb);
  std::vector<double> vals = singularValues(cx, rep, g, bs.k);
  std::vector<double> cuts(vals.begin() + 1, vals.end() - 1);

  Decomposition dec{RefinedComplex::build(cx, bs, g, cuts, std::move(splits)),
                    cuts, {}, {}, {}, {}};
  const RefinedComplex& rc = dec.rc;

  std::set<VId> singExt(rep.interiorSingular.begin(), rep.interiorSingular.end());
  singExt.insert(rep.boundarySingular.begin(), rep.boundarySingular.end());
  for (int i = 0; i < static_cast<int>(rc.verts().size()); ++i)
    if (rc.verts()[i].kind == RVKind::Original &&
        singExt.count(cx.externalId(rc.verts()[i].orig)))
      dec.singularRv.insert(i);

  const auto& cells = rc.lifted();
  int n = static_cast<int>(cells.size());

  std::map<SideKey, std::vector<std::pair<int, int>>> byKey;
  for (int c = 0; c < n; ++c)
    for (int si = 0; si < static_cast<int>(cells[c].sides.size()); ++si)
      byKey[keyOf(cells[c].sides[si])].push_back({c, si});

  UF uf(n);
  for (const auto& [key, occ] : byKey) {
    if (occ.size() > 2)
      throw ValidationError("internal: side shared by >2 lifted cells");
    if (occ.size() == 2 && key[0] != 2 &&
        cells[occ[0].first].band == cells[occ[1].first].band)
      uf.unite(occ[0].first, occ[1].first);
  }

  // deterministic component ids ordered by (band, first cell)
  std::map<int, int> rootToComp;
  dec.componentOf.assign(n, -1);
  for (int c = 0; c < n; ++c) {
    int r = uf.find(c);
    if (!rootToComp.count(r)) {
      rootToComp[r] = static_cast<int>(dec.components.size());
      Component comp;
      comp.band = cells[c].band;
      dec.components.push_back(std::move(comp));
    }
    dec.componentOf[c] = rootToComp[r];
    dec.components[dec.componentOf[c]].cells.push_back(c);
  }

  // a side is interior iff its twin lives in the same band
  auto twin = [&](int c, int si) -> std::pair<int, int> {
    const auto& occ = byKey.at(keyOf(cells[c].sides[si]));
    for (const auto& o : occ)
      if (o != std::make_pair(c, si) &&
          cells[o.first].band == cells[c].band &&
          cells[c].sides[si].kind != SideKind::Chord)
        return o;
    return {-1, -1};
  };

  auto dartRole = [&](const Side& sd) {
    if (sd.kind != SideKind::Edge) return DartRole::Level;
    const Seg& sg = rc.segs()[sd.host];
    const Edge& ed = rc.base().edge(sg.hostEdge);
    Role ru = bs.role[ed.u], rv = bs.role[ed.v];
    bool lvl = (ru == Role::DirichletK && rv == Role::DirichletK) ||
               (ru == Role::Dirichlet0 && rv == Role::Dirichlet0);
    return lvl ? DartRole::Level : DartRole::Neumann;
  };

  std::set<std::pair<int, int>> pending;
  for (int c = 0; c < n; ++c)
    for (int si = 0; si < static_cast<int>(cells[c].sides.size()); ++si)
      if (twin(c, si).first < 0) pending.insert({c, si});

  auto nextDart = [&](std::pair<int, int> d) {
    for (;;) {
      int m = static_cast<int>(cells[d.first].sides.size());
      d.second = (d.second + 1) % m;
      std::pair<int, int> t = twin(d.first, d.second);
      if (t.first < 0) return d;
      d = t;
    }
  };

  while (!pending.empty()) {
    std::pair<int, int> start = *pending.begin();
    Component& comp = dec.components[dec.componentOf[start.first]];
    std::vector<Dart> loop;
    std::pair<int, int> d = start;
    do {
      pending.erase(d);
      loop.push_back(
          {d.first, d.second, dartRole(cells[d.first].sides[d.second])});
      d = nextDart(d);
    } while (d != start);
    comp.loops.push_back(std::move(loop));
  }

  // corners, revisits and the classification
  for (Component& comp : dec.components) {
    std::map<int, int> visits;
    bool allConstLoops = true;
    for (const auto& loop : comp.loops) {
      double lo = 1e300, hi = -1e300;
      for (size_t i = 0; i < loop.size(); ++i) {
        const Side& sd = cells[loop[i].cell].sides[loop[i].side];
        visits[sd.a]++;
        lo = std::min(lo, rc.gAt(sd.a));
        hi = std::max(hi, rc.gAt(sd.a));
        if (loop[i].role != loop[(i + 1) % loop.size()].role) comp.corners++;
        if (loop[i].role == DartRole::Neumann) allConstLoops = false;
      }
      if (hi - lo > rc.valueTol()) allConstLoops = false;
    }
    for (const auto& [v, cnt] : visits)
      if (cnt >= 2) comp.identified.push_back({v, cnt});

    // a single-vertex constant arc leaves no constant dart: that side of the
    // quadrilateral degenerates to one Neumann-Neumann pivot at the band end
    // (harmonicity rules this out anywhere else)
    bool quadShape = false;
    if (comp.loops.size() == 1) {
      double blo = rc.bandLo(comp.band), bhi = rc.bandHi(comp.band);
      double tol = rc.valueTol();
      bool levelHi = false, levelLo = false;
      int pivotHi = 0, pivotLo = 0;
      const auto& loop = comp.loops[0];
      int n = static_cast<int>(loop.size());
      for (int i = 0; i < n; ++i) {
        const Side& sd = cells[loop[i].cell].sides[loop[i].side];
        if (loop[i].role == DartRole::Level) {
          if (std::abs(rc.gAt(sd.a) - bhi) <= tol) levelHi = true;
          if (std::abs(rc.gAt(sd.a) - blo) <= tol) levelLo = true;
        } else if (loop[(i + 1) % n].role == DartRole::Neumann) {
          if (std::abs(rc.gAt(sd.b) - bhi) <= tol) pivotHi++;
          if (std::abs(rc.gAt(sd.b) - blo) <= tol) pivotLo++;
        }
      }
      quadShape = (levelHi || pivotHi == 1) && (levelLo || pivotLo == 1) &&
                  comp.corners == 2 * ((levelHi ? 1 : 0) + (levelLo ? 1 : 0));
    }
    if (quadShape)
      comp.kind = comp.identified.empty() ? CompKind::Quadrilateral
                                          : CompKind::SlicedQuadrilateral;
    else if (comp.loops.size() == 2 && comp.corners == 0 && allConstLoops)
      comp.kind = CompKind::Annulus;
    else
      throw UnclassifiableComponent(
          "band " + std::to_string(comp.band) + ": " +
          std::to_string(comp.loops.size()) + " loops, " +
          std::to_string(comp.corners) + " corners");
  }

  dec.bands.resize(rc.bandCount());
  for (int b = 0; b < rc.bandCount(); ++b) {
    dec.bands[b].index = b;
    dec.bands[b].lo = rc.bandLo(b);
    dec.bands[b].hi = rc.bandHi(b);
  }
  for (int cid = 0; cid < static_cast<int>(dec.components.size()); ++cid)
    dec.bands[dec.components[cid].band].components.push_back(cid);
  return dec;
}

std::vector<GluingEdge> verifyGluing(const Decomposition& dec, double tolRel) {
  const RefinedComplex& rc = dec.rc;
  const auto& cells = rc.lifted();

  // chord -> (below cell, above cell), grouped by level and component pair
  struct Chord {
    int a, b;
  };
  std::map<std::array<int, 3>, std::vector<Chord>> groups;
  std::map<SideKey, std::vector<int>> chordCells;
  for (int c = 0; c < static_cast<int>(cells.size()); ++c)
    for (const Side& sd : cells[c].sides)
      if (sd.kind == SideKind::Chord) chordCells[keyOf(sd)].push_back(c);

  for (const auto& [key, occ] : chordCells) {
    if (occ.size() != 2)
      throw GluingMismatch("chord not shared by exactly two cells");
    int cb = occ[0], ca = occ[1];
    if (cells[cb].band > cells[ca].band) std::swap(cb, ca);
    groups[{key[1], dec.componentOf[cb], dec.componentOf[ca]}].push_back(
        {key[2], key[3]});
  }

  std::vector<GluingEdge> out;
  for (const auto& [gk, chords] : groups) {
    double s = rc.levels()[gk[0]];
    std::map<int, std::vector<std::pair<int, int>>> adj;
    for (int i = 0; i < static_cast<int>(chords.size()); ++i) {
      adj[chords[i].a].push_back({i, chords[i].b});
      adj[chords[i].b].push_back({i, chords[i].a});
    }
    auto isBreak = [&](int node) {
      return dec.singularRv.count(node) || adj[node].size() != 2;
    };
    std::vector<bool> used(chords.size(), false);
    auto emitChain = [&](int start) {
      std::vector<int> nodes = {start};
      int at = start;
      for (;;) {
        int step = -1, nxt = -1;
        for (const auto& [ci, other] : adj[at])
          if (!used[ci]) {
            step = ci;
            nxt = other;
            break;
          }
        if (step < 0) break;
        used[step] = true;
        nodes.push_back(nxt);
        at = nxt;
        if (isBreak(at)) break;
      }
      GluingEdge ge;
      ge.level = s;
      ge.below = gk[1];
      ge.above = gk[2];
      ge.pieces = static_cast<int>(nodes.size()) - 1;
      ge.closed = nodes.size() > 1 && nodes.front() == nodes.back();
      if (ge.closed) nodes.pop_back();
      for (int nd : nodes) {
        if (dec.singularRv.count(nd)) continue;
        ge.lengthBelow += belowSum(rc, nd, s);
        ge.lengthAbove += aboveSum(rc, nd, s);
      }
      double ref = std::max({std::abs(ge.lengthBelow), std::abs(ge.lengthAbove),
                             1e-300});
      if (std::abs(ge.lengthBelow - ge.lengthAbove) > tolRel * ref)
        throw GluingMismatch("seam at level " + std::to_string(s) +
                             " measures " + std::to_string(ge.lengthBelow) +
                             " below vs " + std::to_string(ge.lengthAbove) +
                             " above");
      out.push_back(ge);
    };
    for (const auto& [node, inc] : adj) {
      if (!isBreak(node)) continue;
      bool free = false;
      for (const auto& [ci, other] : inc)
        if (!used[ci]) free = true;
      while (free) {
        emitChain(node);
        free = false;
        for (const auto& [ci, other] : adj[node])
          if (!used[ci]) free = true;
      }
    }
    for (const auto& [node, inc] : adj)  // untouched cycles
      for (const auto& [ci, other] : inc)
        if (!used[ci]) emitChain(node);
  }
  return out;
}

}  // namespace harmtile
