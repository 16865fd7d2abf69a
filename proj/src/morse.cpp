#include "harmtile/morse.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "harmtile/errors.hpp"

namespace harmtile {

namespace {

// sign of g(w)-g(v) under the tie policy
int cmpVal(const CellComplex& cx, const std::vector<double>& g, int v, int w,
           double tol, bool perturb) {
  double d = g[w] - g[v];
  if (d > tol) return 1;
  if (d < -tol) return -1;
  if (!perturb)
    throw TieError("tied values on edge (" + std::to_string(cx.externalId(v)) +
                   "," + std::to_string(cx.externalId(w)) + ")");
  return cx.externalId(w) > cx.externalId(v) ? 1 : -1;
}

}  // namespace

int signChanges(const CellComplex& cx, const std::vector<double>& g, int v,
                double tol, bool tiePerturb) {
  const std::vector<int>& star = cx.vertexStar(v);
  std::vector<int> sg;
  sg.reserve(star.size());
  for (int w : star) sg.push_back(cmpVal(cx, g, v, w, tol, tiePerturb));
  int n = static_cast<int>(sg.size());
  int changes = 0;
  int last = n - (cx.isBoundary(v) ? 1 : 0);
  for (int i = 0; i < last; ++i)
    if (sg[i] != sg[(i + 1) % n]) ++changes;
  return changes;
}

double vertexIndex(const CellComplex& cx, const std::vector<double>& g, int v,
                   double tol, bool tiePerturb) {
  int sgc = signChanges(cx, g, v, tol, tiePerturb);
  if (cx.isBoundary(v)) return (1 - sgc) / 2.0;
  return 1 - sgc / 2.0;
}

IndexReport indexFormulaCheck(const CellComplex& cx, const BoundarySpec& bs,
                              const std::vector<double>& g, bool tiePerturb) {
  double tol = 1e-9 * bs.k;
  IndexReport rep;
  rep.perturbed = tiePerturb;
  rep.arcEndpointCount = bs.arcEndpointCount();

  int total2 = 0;  // doubled indices stay integral
  for (int v = 0; v < cx.numVertices(); ++v) {
    Role r = bs.role[v];
    if (r == Role::DirichletK || r == Role::Dirichlet0) continue;
    int sgc = signChanges(cx, g, v, tol, tiePerturb);
    int ind2 = cx.isBoundary(v) ? 1 - sgc : 2 - sgc;
    total2 += ind2;
    rep.perVertex[cx.externalId(v)] = {sgc, ind2 / 2.0};
    if (ind2 < 0) {
      (cx.isBoundary(v) ? rep.boundarySingular : rep.interiorSingular)
          .push_back(cx.externalId(v));
    }
  }
  rep.totalIndex = total2 / 2.0;

  int chi = cx.eulerCharacteristic();
  int expected2 = 2 * chi - rep.arcEndpointCount / 2;
  rep.expected = expected2 / 2.0;
  if (total2 != expected2)
    throw IndexMismatch("index total " + std::to_string(rep.totalIndex) +
                        " != expected " + std::to_string(rep.expected));
  return rep;
}

LevelCurve traceLevelCurve(const RefinedComplex& rc, double s) {
  const std::vector<double>& lv = rc.levels();
  int ix = -1;
  for (int i = 0; i < static_cast<int>(lv.size()); ++i)
    if (std::abs(lv[i] - s) <= rc.valueTol()) ix = i;
  if (ix < 0)
    throw ValidationError("level " + std::to_string(s) +
                          " is not a refinement level");

  // chords hosted at this level, read off the band just below it
  std::vector<std::pair<int, int>> chords;
  for (const LiftedCell& lc : rc.lifted()) {
    if (lc.band != ix) continue;
    for (const Side& sd : lc.sides)
      if (sd.kind == SideKind::Chord && sd.host == ix)
        chords.push_back({sd.a, sd.b});
  }

  std::map<int, std::vector<std::pair<int, int>>> adj;  // node -> (chord, other)
  for (int c = 0; c < static_cast<int>(chords.size()); ++c) {
    adj[chords[c].first].push_back({c, chords[c].second});
    adj[chords[c].second].push_back({c, chords[c].first});
  }

  LevelCurve out;
  out.value = lv[ix];
  std::vector<bool> used(chords.size(), false);

  auto takeStep = [&](int at) -> int {  // -1 when stuck
    for (auto& [c, other] : adj[at])
      if (!used[c]) {
        used[c] = true;
        return other;
      }
    return -1;
  };

  // trails: start at odd-degree nodes first, then mop up circuits
  auto walkFrom = [&](int start) {
    std::vector<int> trail = {start};
    for (int at = start;;) {
      int nxt = takeStep(at);
      if (nxt < 0) break;
      trail.push_back(nxt);
      at = nxt;
    }
    // splice in detours missed by the greedy walk (figure-eights)
    for (size_t i = 0; i < trail.size(); ++i) {
      int nxt = takeStep(trail[i]);
      if (nxt < 0) continue;
      std::vector<int> detour = {nxt};
      for (int at = nxt;;) {
        int m = takeStep(at);
        if (m < 0) break;
        detour.push_back(m);
        at = m;
      }
      trail.insert(trail.begin() + i + 1, detour.begin(), detour.end());
      --i;  // rescan the same anchor
    }
    return trail;
  };

  std::vector<int> starts;
  for (auto& [node, inc] : adj)
    if (inc.size() % 2 == 1) starts.push_back(node);
  for (auto& [node, inc] : adj) starts.push_back(node);

  for (int start : starts) {
    bool any = false;
    for (auto& [c, other] : adj[start])
      if (!used[c]) any = true;
    if (!any) continue;
    std::vector<int> trail = walkFrom(start);
    CurveComponent comp;
    comp.value = out.value;
    comp.closed = trail.size() > 1 && trail.front() == trail.back();
    if (comp.closed) trail.pop_back();
    comp.nodes = trail;
    for (int n : comp.nodes) comp.points.push_back(rc.posAt(n));
    std::set<int> seen;
    for (int n : comp.nodes) {
      if (!seen.insert(n).second) continue;
      const RefinedVertex& rv = rc.verts()[n];
      if (rv.kind != RVKind::Original) continue;
      size_t deg = adj[n].size();
      bool sing = rc.onBoundary(n) ? deg >= 2 : deg >= 4;
      if (sing) comp.singular.push_back(n);
    }
    out.components.push_back(std::move(comp));
  }

  std::set<int> allSing;
  for (const CurveComponent& c : out.components)
    allSing.insert(c.singular.begin(), c.singular.end());
  out.singularVertices.assign(allSing.begin(), allSing.end());
  return out;
}

double fluxLength(const RefinedComplex& rc, const CurveComponent& comp,
                  CurveSide side) {
  double s = comp.value;
  double tol = rc.valueTol();
  double total = 0;
  bool sideSeen = false;
  std::set<int> nodes(comp.nodes.begin(), comp.nodes.end());
  for (int n : nodes) {
    if (rc.verts()[n].kind == RVKind::Diagonal) continue;
    for (const auto& [segIx, other] : rc.segsAt(n)) {
      double go = rc.gAt(other);
      double c = rc.segs()[segIx].c;
      if (side == CurveSide::Above && go > s + tol) {
        total += c * (go - s);
        sideSeen = true;
      } else if (side == CurveSide::Below && go < s - tol) {
        total += c * (s - go);
        sideSeen = true;
      }
    }
  }
  if (!sideSeen)
    throw SideUndefined("no cells on the requested side of the curve");
  return total;
}

}  // namespace harmtile
