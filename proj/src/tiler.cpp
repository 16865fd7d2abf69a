#include "harmtile/tiler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "harmtile/errors.hpp"

namespace harmtile {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Sweep state for one component. Tiles hang below the level currently being
// walked; the y (flux) coordinate decreases along each walk, so every walk
// both places the new tiles and cross-checks the prefix sums against the
// tiles already placed above.

struct Sweep {
  const Decomposition& dec;
  const Component& comp;
  const RefinedComplex& rc;
  int compId;
  double lo, hi, W, H;
  bool cylinder;
  double vtol, ytol;
  int degBwdRv = -1, degFwdRv = -1;  // fan bounds of a single-vertex top arc

  std::set<int> segSet;   // segments of this component
  std::set<int> vertSet;  // refined vertices on its cells
  std::vector<double> levels;  // distinct vertex values, descending
  std::map<int, int> tileOf;   // segment -> tile index
  std::vector<RectTile> tiles;

  explicit Sweep(const Decomposition& d, int id)
      : dec(d), comp(d.components[id]), rc(d.rc), compId(id) {
    lo = dec.bands[comp.band].lo;
    hi = dec.bands[comp.band].hi;
    W = hi - lo;
    cylinder = comp.kind == CompKind::Annulus;
    vtol = rc.valueTol();
    for (int ci : comp.cells)
      for (const Side& sd : rc.lifted()[ci].sides) {
        if (sd.kind == SideKind::Edge) segSet.insert(sd.host);
        vertSet.insert(sd.a);
        vertSet.insert(sd.b);
      }
    std::vector<double> vals;
    for (int rv : vertSet) vals.push_back(rc.gAt(rv));
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    for (double v : vals)
      if (levels.empty() || levels.back() - v > vtol) levels.push_back(v);
    if (levels.size() < 2)
      throw ConsistencyViolation("component " + std::to_string(compId) +
                                 " spans a single level");
    // flux through the top side, computed up front so walks can anchor on it
    H = 0;
    for (int rv : vertSet)
      if (hi - rc.gAt(rv) <= vtol) H += fanFlux(rv);
    ytol = 1e-9 * std::max(1.0, H);
  }

  bool inComp(int seg) const { return segSet.count(seg) != 0; }

  // On a cylinder the flux coordinate is only defined modulo the
  // circumference: each level walk unrolls its own sheet, so comparisons
  // against tiles hung by earlier walks must wrap to the nearest period.
  double wrapC(double d) const {
    return (cylinder && H > 0) ? d - H * std::round(d / H) : d;
  }

  double fanFlux(int rv) const {
    double s = 0;
    for (auto [seg, other] : rc.segsAt(rv))
      if (inComp(seg) && rc.gAt(rv) - rc.gAt(other) > vtol)
        s += rc.segs()[seg].c * (rc.gAt(rv) - rc.gAt(other));
    return s;
  }

  // --- walk elements ------------------------------------------------------

  struct Elem {
    int type;  // 0 vertex, 1 segment crossing, 2 diagonal crossing
    int id;    // refined vertex or segment index
    Vec2 pos;
  };

  static double angleOf(Vec2 d) { return std::atan2(d.y, d.x); }

  // Downward segments at a vertex, CCW starting from the direction toward the
  // previous walk element and stopping at the direction toward the next one
  // (the fan of the current wedge; pinched vertices get one fan per visit).
  std::vector<std::pair<int, int>> fanAt(int rv, Vec2 bwd, bool hasFwd,
                                         Vec2 fwd) {
    const double aeps = 1e-9;
    double back = angleOf(bwd);
    double span = 2 * kPi;
    if (hasFwd) {
      span = std::fmod(angleOf(fwd) - back + 4 * kPi, 2 * kPi);
      if (span < aeps) span = 2 * kPi;
    }
    std::vector<std::pair<double, std::pair<int, int>>> fan;
    for (auto [seg, other] : rc.segsAt(rv)) {
      if (!inComp(seg) || rc.gAt(rv) - rc.gAt(other) <= vtol) continue;
      if (tileOf.count(seg)) continue;  // other wedge, already placed
      double rel = std::fmod(angleOf(rc.posAt(other) - rc.posAt(rv)) - back +
                                 4 * kPi,
                             2 * kPi);
      if (rel > kPi * 2 - aeps) rel -= 2 * kPi;
      if (rel < -aeps || rel > span + aeps) continue;
      fan.push_back({rel, {seg, other}});
    }
    std::sort(fan.begin(), fan.end());
    std::vector<std::pair<int, int>> out;
    for (auto& f : fan) out.push_back(f.second);
    return out;
  }

  void emitTile(int seg, int upperRv, int lowerRv, double ytop) {
    if (tileOf.count(seg))
      throw ConsistencyViolation("segment tiled twice in component " +
                                 std::to_string(compId));
    RectTile t;
    t.seg = seg;
    t.upper = upperRv;
    t.lower = lowerRv;
    t.x0 = rc.gAt(lowerRv);
    t.x1 = rc.gAt(upperRv);
    t.y1 = ytop;
    t.y0 = ytop - rc.segs()[seg].c * (t.x1 - t.x0);
    tileOf[seg] = static_cast<int>(tiles.size());
    tiles.push_back(t);
  }

  // Tiles of the segments running up from rv inside the component; checked
  // for contiguity, returning (top, bottom) of their union.
  std::pair<double, double> inflowSpan(int rv, double sLevel) {
    std::vector<std::pair<double, double>> iv;
    for (auto [seg, other] : rc.segsAt(rv)) {
      if (!inComp(seg) || rc.gAt(other) - sLevel <= vtol) continue;
      auto it = tileOf.find(seg);
      if (it == tileOf.end())
        throw ConsistencyViolation("missing tile above vertex " +
                                   std::to_string(rv));
      iv.push_back({tiles[it->second].y1, tiles[it->second].y0});
    }
    if (iv.empty()) return {0, 0};
    // chain the stack top-down; on a cylinder adjacent tiles may sit on
    // different sheets, so match bottoms to tops modulo the circumference,
    // starting from the tile no other tile sits on
    size_t at = 0;
    for (size_t i = 0; i < iv.size(); ++i) {
      bool covered = false;
      for (size_t j = 0; j < iv.size(); ++j)
        if (j != i && std::abs(wrapC(iv[j].second - iv[i].first)) <= ytol)
          covered = true;
      if (!covered) at = i;
    }
    std::vector<char> used(iv.size(), 0);
    double top = iv[at].first, bot = iv[at].second;
    used[at] = 1;
    for (size_t n = 1; n < iv.size(); ++n) {
      size_t nxt = iv.size();
      for (size_t j = 0; j < iv.size(); ++j)
        if (!used[j] && std::abs(wrapC(iv[j].first - bot)) <= ytol) nxt = j;
      if (nxt == iv.size())
        throw ConsistencyViolation("inflow tiles not contiguous at vertex " +
                                   std::to_string(rv));
      used[nxt] = 1;
      bot -= iv[nxt].first - iv[nxt].second;
    }
    return {top, bot};
  }

  // Process one walk element: verify the running flux coordinate against the
  // tiles above, then hang this element's tiles. Returns the updated cum.
  double processElem(const Elem& e, double cum, double sLevel, Vec2 bwd,
                     bool hasFwd, Vec2 fwd) {
    if (e.type == 2) return cum;  // diagonal crossing, zero extent
    if (e.type == 1) {
      auto it = tileOf.find(e.id);
      if (it == tileOf.end())
        throw ConsistencyViolation("level crosses untiled segment " +
                                   std::to_string(e.id));
      const RectTile& t = tiles[it->second];
      double dd = wrapC(t.y1 - cum);
      if (std::abs(dd) > ytol)
        throw ConsistencyViolation(
            "prefix flux mismatch at segment " + std::to_string(e.id) +
            ": expected " + fmt(cum) + ", tile top " + fmt(t.y1));
      return cum + dd - (t.y1 - t.y0);
    }
    bool hasIn = false;
    for (auto [seg, other] : rc.segsAt(e.id))
      if (inComp(seg) && rc.gAt(other) - sLevel > vtol) hasIn = true;
    double hin = 0;
    if (hasIn) {
      auto [top, bot] = inflowSpan(e.id, sLevel);
      double dd = wrapC(top - cum);
      if (std::abs(dd) > ytol)
        throw ConsistencyViolation("prefix flux mismatch at vertex " +
                                   std::to_string(e.id) + ": expected " +
                                   fmt(cum) + ", inflow top " + fmt(top));
      cum += dd;
      hin = top - bot;
    }
    double y = cum, hout = 0;
    for (auto [seg, other] : fanAt(e.id, bwd, hasFwd, fwd)) {
      emitTile(seg, e.id, other, y);
      y = tiles.back().y0;
      hout += rc.segs()[seg].c * (rc.gAt(e.id) - rc.gAt(other));
    }
    if (hasIn && hout > 0 && std::abs(hin - hout) > ytol)
      throw ConsistencyViolation("flux imbalance at vertex " +
                                 std::to_string(e.id) + ": in " + fmt(hin) +
                                 ", out " + fmt(hout));
    return hout > 0 ? y : cum;
  }

  // --- top side (walked off the component boundary) ------------------------

  const Side& sideOf(const Dart& d) const {
    return rc.lifted()[d.cell].sides[d.side];
  }

  bool dartAt(const Dart& d, double v) const {
    const Side& s = sideOf(d);
    return std::abs(rc.gAt(s.a) - v) <= vtol && std::abs(rc.gAt(s.b) - v) <= vtol;
  }

  // Vertex chain of the top side, reversed so that the sub-level region lies
  // to the right of travel (sides are CCW in their cells, hence the loop has
  // the component on the left).
  std::vector<int> topChain(const std::vector<Dart>& loop, bool& closed) {
    int n = static_cast<int>(loop.size());
    std::vector<int> at;
    for (int i = 0; i < n; ++i)
      if (dartAt(loop[i], hi)) at.push_back(i);
    if (at.empty()) {
      // single-vertex top arc: the whole side is one pivot's fan, bounded by
      // the pivot's two boundary edges (loop has the component on the left)
      for (int i = 0; i < n; ++i) {
        const Side& sd = sideOf(loop[i]);
        if (std::abs(rc.gAt(sd.b) - hi) > vtol) continue;
        closed = false;
        degBwdRv = sideOf(loop[(i + 1) % n]).b;
        degFwdRv = sd.a;
        return {sd.b};
      }
      throw ConsistencyViolation("component " + std::to_string(compId) +
                                 " has no edge along its top level");
    }
    closed = static_cast<int>(at.size()) == n;
    std::vector<int> chain;
    if (closed) {
      for (int i = 0; i < n; ++i) chain.push_back(sideOf(loop[i]).a);
      std::reverse(chain.begin(), chain.end());
      auto mn = std::min_element(chain.begin(), chain.end());
      std::rotate(chain.begin(), mn, chain.end());
      return chain;
    }
    int start = 0;  // first dart of the cyclic run
    for (int i = 0; i < n; ++i)
      if (dartAt(loop[i], hi) && !dartAt(loop[(i + n - 1) % n], hi)) start = i;
    int len = static_cast<int>(at.size());
    for (int j = 0; j < len; ++j)
      chain.push_back(sideOf(loop[(start + j) % n]).a);
    chain.push_back(sideOf(loop[(start + len - 1) % n]).b);
    // verify the run is the only one
    for (int i : at)
      if ((i - start + n) % n >= len)
        throw ConsistencyViolation("top level split into several runs");
    std::reverse(chain.begin(), chain.end());
    return chain;
  }

  void walkTop() {
    const std::vector<Dart>* loop = nullptr;
    for (const auto& lp : comp.loops) {
      for (const Dart& d : lp) {
        if (dartAt(d, hi)) loop = &lp;
        if (std::abs(rc.gAt(sideOf(d).b) - hi) <= vtol && !loop) loop = &lp;
      }
    }
    if (!loop)
      throw ConsistencyViolation("no boundary loop along the top level");
    bool closed = false;
    std::vector<int> chain = topChain(*loop, closed);
    int n = static_cast<int>(chain.size());
    double cum = cylinder ? 0.0 : H;
    for (int j = 0; j < n; ++j) {
      int rv = chain[j];
      Vec2 p = rc.posAt(rv);
      bool hasFwd = closed || j + 1 < n;
      Vec2 fwd = hasFwd ? rc.posAt(chain[(j + 1) % n]) - p : Vec2{0, 0};
      Vec2 bwd = (closed || j > 0) ? rc.posAt(chain[(j + n - 1) % n]) - p
                                   : -1.0 * fwd;
      if (degBwdRv >= 0) {
        bwd = rc.posAt(degBwdRv) - p;
        fwd = rc.posAt(degFwdRv) - p;
        hasFwd = true;
      }
      cum = processElem({0, rv, p}, cum, hi, bwd, hasFwd, fwd);
    }
    double spent = (cylinder ? 0.0 : H) - cum;
    if (std::abs(spent - H) > ytol)
      throw ConsistencyViolation("top side flux " + fmt(spent) +
                                 " != " + fmt(H));
  }

  // --- interior levels (walked on the port graph) ---------------------------

  struct PNode {
    Elem elem;
    std::vector<int> adj;
  };

  void walkLevel(double s) {
    std::map<std::array<int, 4>, int> index;
    std::vector<PNode> nodes;
    auto port = [&](std::array<int, 4> key, Elem e) {
      auto it = index.find(key);
      if (it != index.end()) return it->second;
      index[key] = static_cast<int>(nodes.size());
      nodes.push_back({e, {}});
      return static_cast<int>(nodes.size()) - 1;
    };
    std::map<std::pair<int, int>, int> linkCell;
    for (int ci : comp.cells) {
      const LiftedCell& lc = rc.lifted()[ci];
      std::vector<int> ports;
      for (const Side& sd : lc.sides) {
        double ga = rc.gAt(sd.a), gb = rc.gAt(sd.b);
        if (std::abs(ga - s) <= vtol)
          ports.push_back(port({0, sd.a, 0, 0},
                               {0, sd.a, rc.posAt(sd.a)}));
        if ((ga - s > vtol && s - gb > vtol) ||
            (gb - s > vtol && s - ga > vtol)) {
          double t = (s - ga) / (gb - ga);
          Vec2 p = rc.posAt(sd.a) + t * (rc.posAt(sd.b) - rc.posAt(sd.a));
          if (sd.kind == SideKind::Edge)
            ports.push_back(port({1, sd.host, 0, 0}, {1, sd.host, p}));
          else if (sd.kind == SideKind::Diag)
            ports.push_back(port({2, sd.host, std::min(sd.a, sd.b),
                                  std::max(sd.a, sd.b)},
                                 {2, -1, p}));
          else
            throw ConsistencyViolation("level crosses a cut chord");
        }
      }
      std::sort(ports.begin(), ports.end());
      ports.erase(std::unique(ports.begin(), ports.end()), ports.end());
      if (ports.size() > 2)
        throw ConsistencyViolation("level " + fmt(s) +
                                   " meets a convex cell more than twice");
      if (ports.size() == 2) {
        std::pair<int, int> key{std::min(ports[0], ports[1]),
                                std::max(ports[0], ports[1])};
        auto it = linkCell.find(key);
        if (it == linkCell.end()) {
          linkCell[key] = ci;
          nodes[ports[0]].adj.push_back(ports[1]);
          nodes[ports[1]].adj.push_back(ports[0]);
        }
      }
    }
    if (nodes.empty())
      throw ConsistencyViolation("empty level curve at " + fmt(s));

    std::vector<int> ends;
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].adj.size() == 1) ends.push_back(static_cast<int>(i));
      if (nodes[i].adj.size() > 2 || nodes[i].adj.empty())
        throw ConsistencyViolation("level curve degree " +
                                   std::to_string(nodes[i].adj.size()) +
                                   " at " + fmt(s));
    }

    auto anchorAt = [&](int ix) -> double {
      const Elem& e = nodes[ix].elem;
      if (e.type == 1) {
        auto it = tileOf.find(e.id);
        if (it == tileOf.end()) return -1e300;
        return tiles[it->second].y1;
      }
      if (e.type != 0) return -1e300;
      bool hasIn = false;
      for (auto [seg, other] : rc.segsAt(e.id))
        if (inComp(seg) && rc.gAt(other) - s > vtol) hasIn = true;
      return hasIn ? inflowSpan(e.id, s).first : -1e300;
    };

    int start = -1, first = -1;
    double cum = 0;
    if (cylinder) {
      if (!ends.empty())
        throw ConsistencyViolation("open level curve on a cylinder at " +
                                   fmt(s));
      // prefer anchoring at a segment crossing: it has no fan of its own, so
      // the backward-direction fallback at the walk start never matters; of
      // those take the highest anchor, which keeps this walk on the same
      // unrolled sheet as the walk above for as long as possible
      for (int pass = 0; pass < 2 && start < 0; ++pass) {
        double best = -1e299;
        for (size_t i = 0; i < nodes.size(); ++i) {
          if (pass == 0 && nodes[i].elem.type != 1) continue;
          double a = anchorAt(static_cast<int>(i));
          if (a > best) { best = a; start = static_cast<int>(i); }
        }
      }
      if (start < 0)
        throw ConsistencyViolation("level " + fmt(s) +
                                   " has no anchored element");
      cum = anchorAt(start);
      // orient with the super-level side on the left
      first = nodes[start].adj[0];
      std::pair<int, int> key{std::min(start, first), std::max(start, first)};
      const LiftedCell& lc = rc.lifted()[linkCell.at(key)];
      int sgn = 0;
      Vec2 ref{0, 0};
      for (const Side& sd : lc.sides) {
        if (rc.gAt(sd.a) - s > vtol) { ref = rc.posAt(sd.a); sgn = 1; break; }
        if (s - rc.gAt(sd.a) > vtol && !sgn) { ref = rc.posAt(sd.a); sgn = -1; }
      }
      if (sgn) {
        Vec2 d = nodes[first].elem.pos - nodes[start].elem.pos;
        if (sgn * cross(d, ref - nodes[start].elem.pos) < 0)
          first = nodes[start].adj[1];
      }
    } else {
      if (ends.size() != 2)
        throw ConsistencyViolation("level curve at " + fmt(s) + " has " +
                                   std::to_string(ends.size()) + " endpoints");
      for (int e : ends)
        if (onTopRun(nodes[e].elem)) start = e;
      if (start < 0)
        throw ConsistencyViolation("no level curve endpoint on the top side");
      first = nodes[start].adj[0];
      cum = H;
    }

    double anchor0 = cum;
    int prev = -1, cur = start, nxt = first;
    size_t visited = 0;
    while (true) {
      const Elem& e = nodes[cur].elem;
      bool hasFwd = nxt >= 0;
      Vec2 fwd = hasFwd ? nodes[nxt].elem.pos - e.pos : Vec2{0, 0};
      Vec2 bwd = prev >= 0 ? nodes[prev].elem.pos - e.pos : -1.0 * fwd;
      cum = processElem(e, cum, s, bwd, hasFwd, fwd);
      ++visited;
      if (nxt < 0) break;
      prev = cur;
      cur = nxt;
      if (cylinder && cur == start) break;
      nxt = -1;
      for (int a : nodes[cur].adj)
        if (a != prev) nxt = a;
      if (nxt < 0 && cylinder)
        throw ConsistencyViolation("cylinder level walk stalled at " + fmt(s));
    }
    if (visited != nodes.size())
      throw ConsistencyViolation("level curve at " + fmt(s) +
                                 " is disconnected");
    if (!cylinder && std::abs(cum) > ytol)
      throw ConsistencyViolation("level " + fmt(s) + " walk ends at flux " +
                                 fmt(cum) + ", expected 0");
    if (cylinder && std::abs(wrapC(anchor0 - cum - H)) > ytol)
      throw ConsistencyViolation("level " + fmt(s) + " circumference " +
                                 fmt(anchor0 - cum) + " != " + fmt(H));
  }

  // membership of an element in the top Neumann run (the side after the top
  // level run in boundary order) -- used to orient the open level curves
  std::set<int> topSegs, topVerts;
  void findTopRun() {
    if (cylinder) return;
    const std::vector<Dart>& loop = comp.loops[0];
    int n = static_cast<int>(loop.size());
    int endHi = -1;
    for (int i = 0; i < n; ++i)
      if (dartAt(loop[i], hi) && !dartAt(loop[(i + 1) % n], hi)) endHi = i;
    if (endHi < 0)  // single-vertex top arc: run starts past the pivot
      for (int i = 0; i < n; ++i)
        if (std::abs(rc.gAt(sideOf(loop[i]).b) - hi) <= vtol) endHi = i;
    if (endHi < 0)
      throw ConsistencyViolation("quadrilateral without a top level run");
    for (int j = 1; j < n; ++j) {
      const Dart& d = loop[(endHi + j) % n];
      if (d.role == DartRole::Level) break;
      const Side& sd = sideOf(d);
      if (sd.kind == SideKind::Edge) topSegs.insert(sd.host);
      topVerts.insert(sd.a);
      topVerts.insert(sd.b);
      if (std::abs(rc.gAt(sd.b) - lo) <= vtol) break;  // single-vertex bottom
    }
    if (topSegs.empty() && topVerts.empty())
      throw ConsistencyViolation("empty top side run");
  }

  bool onTopRun(const Elem& e) const {
    if (e.type == 1) return topSegs.count(e.id) != 0;
    if (e.type == 0) return topVerts.count(e.id) != 0;
    return false;
  }

  // --- bottom side closure --------------------------------------------------

  void checkBottom() {
    std::vector<std::pair<double, double>> iv;
    for (const RectTile& t : tiles)
      if (std::abs(t.x0 - lo) <= vtol) iv.push_back({t.y0, t.y1});
    if (iv.empty())
      throw ConsistencyViolation("no tile reaches the bottom level");
    std::sort(iv.begin(), iv.end());
    double total = 0;
    for (size_t i = 0; i < iv.size(); ++i) {
      total += iv[i].second - iv[i].first;
      if (i && std::abs(iv[i].first - iv[i - 1].second) > ytol)
        throw ConsistencyViolation("bottom side not contiguous at flux " +
                                   fmt(iv[i].first));
    }
    if (std::abs(total - H) > ytol)
      throw ConsistencyViolation("bottom side flux " + fmt(total) +
                                 " != " + fmt(H));
    if (!cylinder &&
        (std::abs(iv.front().first) > ytol ||
         std::abs(iv.back().second - H) > ytol))
      throw ConsistencyViolation("bottom side does not span [0, H]");
  }

  void normalizeCylinder() {
    if (!cylinder) return;
    for (RectTile& t : tiles) {
      double h = t.y1 - t.y0;
      double y0 = t.y0 - H * std::floor(t.y0 / H);
      if (y0 >= H) y0 -= H;  // guard fp at the wrap point
      t.y0 = y0;
      t.y1 = y0 + h;
    }
  }
};

// linear interpolation guard for coverage sampling
inline bool inside(double v, double a, double b, double eps) {
  return v > a + eps && v < b - eps;
}

void runCoverage(TiledComponent& tc, int raster) {
  if (raster <= 0) return;
  CoverageReport& cr = tc.coverage;
  cr.raster = raster;
  double C = tc.target == TargetKind::Cylinder ? tc.C : 0;
  double span = C > 0 ? C : tc.H;
  double eps = 1e-9 * std::max({tc.W, tc.H, C});
  std::vector<const RectTile*> live;
  for (const RectTile& t : tc.tiles)
    if (!t.degenerate) live.push_back(&t);
  for (int i = 0; i < raster; ++i) {
    double x = tc.lo + (i + 0.5) * tc.W / raster;
    std::vector<const RectTile*> col;
    for (const RectTile* t : live)
      if (x > t->x0 - eps && x < t->x1 + eps) col.push_back(t);
    bool xSeam = false;
    for (const RectTile* t : col)
      if (std::abs(x - t->x0) <= eps || std::abs(x - t->x1) <= eps)
        xSeam = true;
    if (xSeam) {
      cr.skipped += raster;
      continue;
    }
    for (int j = 0; j < raster; ++j) {
      double y = (j + 0.5) * span / raster;
      int mult = 0;
      bool seam = false;
      for (const RectTile* t : col) {
        if (!inside(x, t->x0, t->x1, eps)) continue;
        for (double yy : {y, y + C}) {
          if (std::abs(yy - t->y0) <= eps || std::abs(yy - t->y1) <= eps)
            seam = true;
          else if (inside(yy, t->y0, t->y1, eps))
            ++mult;
          if (C == 0) break;
        }
      }
      if (seam) {
        ++cr.skipped;
        continue;
      }
      ++cr.sampled;
      if (mult == 0)
        throw CoverageGap("uncovered point (" + fmt(x) + ", " + fmt(y) +
                          ") in component " + std::to_string(tc.component));
      if (mult > 1)
        throw OverlapDetected("multiplicity " + std::to_string(mult) +
                              " at (" + fmt(x) + ", " + fmt(y) +
                              ") in component " + std::to_string(tc.component));
    }
  }
}

TiledComponent tileImpl(const Decomposition& dec, int compId, int raster) {
  const Component& comp = dec.components[compId];
  Sweep sw(dec, compId);
  sw.findTopRun();
  sw.walkTop();
  for (size_t li = 1; li + 1 < sw.levels.size(); ++li)
    sw.walkLevel(sw.levels[li]);
  sw.normalizeCylinder();
  sw.checkBottom();

  // every proper segment carries exactly one tile
  int proper = 0;
  for (int seg : sw.segSet) {
    const Seg& s = sw.rc.segs()[seg];
    if (std::abs(sw.rc.gAt(s.a) - sw.rc.gAt(s.b)) > sw.vtol) ++proper;
  }
  if (proper != static_cast<int>(sw.tiles.size()))
    throw ConsistencyViolation(
        "tiled " + std::to_string(sw.tiles.size()) + " of " +
        std::to_string(proper) + " segments in component " +
        std::to_string(compId));

  TiledComponent out;
  out.component = compId;
  out.lo = sw.lo;
  out.hi = sw.hi;
  out.W = sw.W;
  out.H = sw.H;
  switch (comp.kind) {
    case CompKind::Quadrilateral: out.target = TargetKind::Rectangle; break;
    case CompKind::SlicedQuadrilateral:
      out.target = TargetKind::SlicedRectangle;
      break;
    case CompKind::Annulus:
      out.target = TargetKind::Cylinder;
      out.C = sw.H;
      break;
  }
  out.tiles = std::move(sw.tiles);

  // degenerate (zero drop) segments become markers pinned where the images
  // of their endpoints meet
  auto spanOf = [&](int rv) {
    double a = 1e300, b = -1e300;
    for (const RectTile& t : out.tiles)
      if (t.lower == rv || t.upper == rv) {
        a = std::min(a, t.y0);
        b = std::max(b, t.y1);
      }
    return std::pair<double, double>{a, b};
  };
  int ndeg = 0;
  for (int seg : sw.segSet) {
    const Seg& s = sw.rc.segs()[seg];
    if (std::abs(sw.rc.gAt(s.a) - sw.rc.gAt(s.b)) > sw.vtol) continue;
    ++ndeg;
    auto [a0, a1] = spanOf(s.a);
    auto [b0, b1] = spanOf(s.b);
    double y = 0;
    if (a0 <= a1 && b0 <= b1)
      y = 0.5 * (std::max(a0, b0) + std::min(a1, b1));
    else if (a0 <= a1)
      y = 0.5 * (a0 + a1);
    else if (b0 <= b1)
      y = 0.5 * (b0 + b1);
    RectTile t;
    t.seg = seg;
    t.upper = s.a;
    t.lower = s.b;
    t.x0 = t.x1 = sw.rc.gAt(s.a);
    t.y0 = t.y1 = y;
    t.degenerate = true;
    out.tiles.push_back(t);
  }
  out.coverage.degenerateTiles = ndeg;

  // quotient bookkeeping for sliced targets
  std::set<int> idSet;
  for (auto [rv, visits] : comp.identified) idSet.insert(rv);
  for (RectTile& t : out.tiles)
    if (idSet.count(t.lower) || idSet.count(t.upper)) t.embedded = false;
  for (auto [rv, visits] : comp.identified) {
    SliceImage si;
    si.rv = rv;
    std::vector<std::pair<double, double>> iv;
    for (const RectTile& t : out.tiles)
      if (!t.degenerate && (t.lower == rv || t.upper == rv))
        iv.push_back({t.y0, t.y1});
    std::sort(iv.begin(), iv.end());
    for (auto& p : iv) {
      if (!si.blocks.empty() && p.first - si.blocks.back().second <= sw.ytol)
        si.blocks.back().second = std::max(si.blocks.back().second, p.second);
      else
        si.blocks.push_back(p);
    }
    out.slices.push_back(std::move(si));
  }

  for (const RectTile& t : out.tiles) {
    Marker m;
    m.seg = t.seg;
    m.x0 = t.x0;
    m.x1 = t.x1;
    m.y = t.y1;
    m.degenerate = t.degenerate;
    out.markers.push_back(m);
  }

  // area identities: tiles sum to the component energy and to the target area
  for (int seg : sw.segSet) {
    const Seg& s = sw.rc.segs()[seg];
    double d = sw.rc.gAt(s.a) - sw.rc.gAt(s.b);
    out.energy += s.c * d * d;
  }
  double areas = 0;
  for (const RectTile& t : out.tiles) areas += (t.x1 - t.x0) * (t.y1 - t.y0);
  double scale = std::max(1.0, out.energy);
  if (std::abs(areas - out.energy) > 1e-11 * scale)
    throw ConsistencyViolation("tile area sum " + fmt(areas) +
                               " != component energy " + fmt(out.energy));
  if (std::abs(out.W * out.H - out.energy) > 1e-9 * scale)
    throw ConsistencyViolation("target area " + fmt(out.W * out.H) +
                               " != component energy " + fmt(out.energy));

  runCoverage(out, raster);
  return out;
}

}  // namespace

TiledComponent tileComponent(const Decomposition& dec, int compId, int raster) {
  if (compId < 0 || compId >= static_cast<int>(dec.components.size()))
    throw ValidationError("no component " + std::to_string(compId));
  return tileImpl(dec, compId, raster);
}

TiledComponent tileQuadrilateral(const Decomposition& dec, int compId,
                                 int raster) {
  if (dec.components.at(compId).kind != CompKind::Quadrilateral)
    throw ValidationError("component " + std::to_string(compId) +
                          " is not a quadrilateral");
  return tileImpl(dec, compId, raster);
}

TiledComponent tileAnnulus(const Decomposition& dec, int compId, int raster) {
  if (dec.components.at(compId).kind != CompKind::Annulus)
    throw ValidationError("component " + std::to_string(compId) +
                          " is not an annulus");
  return tileImpl(dec, compId, raster);
}

TiledComponent tileSlicedQuadrilateral(const Decomposition& dec, int compId,
                                       int raster) {
  if (dec.components.at(compId).kind != CompKind::SlicedQuadrilateral)
    throw ValidationError("component " + std::to_string(compId) +
                          " is not a sliced quadrilateral");
  return tileImpl(dec, compId, raster);
}

SurfaceNet assembleSurface(const Decomposition& dec, int raster) {
  SurfaceNet net;
  net.boundaryComponents =
      static_cast<int>(dec.rc.base().boundaryLoops().size());
  for (int i = 0; i < static_cast<int>(dec.components.size()); ++i) {
    net.parts.push_back(tileComponent(dec, i, raster));
    net.energy += net.parts.back().energy;
  }
  net.seams = verifyGluing(dec);

  // total angle swept around each refined vertex over all component
  // boundaries: pi per side visit, pi/2 per corner visit
  std::map<int, double> theta;
  for (const Component& comp : dec.components)
    for (const auto& loop : comp.loops) {
      int n = static_cast<int>(loop.size());
      for (int i = 0; i < n; ++i) {
        const Side& s = dec.rc.lifted()[loop[i].cell].sides[loop[i].side];
        bool corner = loop[i].role != loop[(i + 1) % n].role;
        theta[s.b] += corner ? kPi / 2 : kPi;
      }
    }
  double atol = 1e-9;
  for (auto [rv, th] : theta) {
    bool bd = dec.rc.onBoundary(rv);
    double expect = bd ? kPi : 2 * kPi;
    if (std::abs(th - expect) <= atol) continue;
    ConeEntry ce;
    ce.rv = rv;
    ce.boundary = bd;
    if (bd && std::abs(th - kPi / 2) <= atol) {
      ce.kind = ConeEntry::Kind::Corner;
      ce.angle = kPi / 2;
      ce.multiplicity = 1;
    } else if (bd) {
      double m = th / kPi;
      if (std::abs(m - std::round(m)) > 1e-6)
        throw ConsistencyViolation("boundary angle " + fmt(th) +
                                   " at vertex " + std::to_string(rv) +
                                   " is not a multiple of pi");
      ce.kind = ConeEntry::Kind::Slice;
      ce.angle = kPi;
      ce.multiplicity = static_cast<int>(std::round(m)) - 1;
    } else {
      double m = th / kPi;
      if (std::abs(m - std::round(m)) > 1e-6 ||
          static_cast<int>(std::round(m)) % 2)
        throw ConsistencyViolation("interior cone angle " + fmt(th) +
                                   " at vertex " + std::to_string(rv) +
                                   " is not an even multiple of pi");
      ce.kind = ConeEntry::Kind::Interior;
      ce.angle = std::round(m) * kPi;
      ce.multiplicity = 1;
    }
    net.cones.push_back(ce);
  }
  return net;
}

DoublingReport doublingReport(const SurfaceNet& net) {
  DoublingReport rep;
  rep.genus = net.boundaryComponents - 1;
  rep.area = 2 * net.energy;
  for (const ConeEntry& ce : net.cones) {
    DoubledCone dc;
    dc.rv = ce.rv;
    if (!ce.boundary) {
      dc.angle = ce.angle;
      dc.copies = 2;
    } else {
      double total = ce.kind == ConeEntry::Kind::Corner
                         ? kPi / 2
                         : ce.angle * (ce.multiplicity + 1);
      dc.angle = 2 * total;
      dc.copies = 1;
    }
    rep.cones.push_back(dc);
  }
  return rep;
}

}  // namespace harmtile
