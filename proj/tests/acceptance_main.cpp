// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each check carries its stated tolerance; "exact" means ==.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "harmtile/bvp.hpp"
#include "harmtile/complex.hpp"
#include "harmtile/decomp.hpp"
#include "harmtile/errors.hpp"
#include "harmtile/fixtures.hpp"
#include "harmtile/morse.hpp"
#include "harmtile/refine.hpp"
#include "harmtile/tiler.hpp"
#include "oracle.hpp"

using namespace harmtile;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Solved {
  RawComplex raw;
  CellComplex cx;
  BoundarySpec bs;
  Potential pot;
};

Solved solved(const std::string& name) {
  RawComplex raw = genFixture(name);
  CellComplex cx = CellComplex::build(raw);
  BoundarySpec bs = deriveBoundarySpec(cx, raw);
  Potential pot = solveDNBVP(cx, bs);
  return {std::move(raw), std::move(cx), std::move(bs), std::move(pot)};
}

const char* kFixtures[] = {"FIX-QUAD",   "FIX-ANN",    "FIX-ANN-INNER",
                           "FIX-ANN-BOTH", "FIX-CYL",  "FIX-PANTS1",
                           "FIX-PANTS2"};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

double relErr(double a, double b) {
  return std::abs(a - b) / std::max(1e-300, std::abs(b));
}

// ---- 1: index totals on the worked examples, exact ------------------------

void c1() {
  struct Row {
    const char* name;
    double total;
    size_t interior, boundary;
  };
  for (Row r : {Row{"FIX-QUAD", 0.0, 0, 0}, Row{"FIX-ANN", -0.5, 0, 1},
                Row{"FIX-ANN-INNER", -0.5, 0, 1},
                Row{"FIX-ANN-BOTH", -1.0, 0, 2}, Row{"FIX-PANTS1", -1.5, 1, 1},
                Row{"FIX-PANTS2", -2.0, 1, 2}}) {
    auto t0 = std::chrono::steady_clock::now();
    auto S = solved(r.name);
    IndexReport rep = indexFormulaCheck(S.cx, S.bs, S.pot.g);
    require(rep.totalIndex == r.total,
            std::string(r.name) + " total " + std::to_string(rep.totalIndex));
    require(rep.totalIndex == rep.expected, std::string(r.name) + " identity");
    require(rep.interiorSingular.size() == r.interior &&
                rep.boundarySingular.size() == r.boundary,
            std::string(r.name) + " singular counts");
    if (std::string(r.name) == "FIX-ANN-BOTH") {
      double a = S.pot.g[S.cx.internalId(rep.boundarySingular[0])];
      double b = S.pot.g[S.cx.internalId(rep.boundarySingular[1])];
      require(std::abs(a - b) > 1e-6, "ANN-BOTH singular levels distinct");
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0).count();
    require(dt < 1.0, std::string(r.name) + " exceeded 1s");
  }
}

// ---- 2: energy equals summed target areas ----------------------------------

void c2() {
  auto exact = oracle::fixtureExact("FIX-QUAD");
  auto raw = genFixture("FIX-QUAD");
  oracle::Frac E(0);
  for (const RawEdge& e : raw.edges) {
    oracle::Frac d = exact.at(e.u) - exact.at(e.v);
    E = E + oracle::Frac(static_cast<long long>(e.c)) * d * d;
  }
  require(E == oracle::Frac(13, 11), "rational oracle energy");

  auto checkOne = [](const std::string& name) {
    auto S = solved(name);
    Decomposition dec = decompose(S.cx, S.bs, S.pot.g);
    SurfaceNet net = assembleSurface(dec, 0);
    double sumAreas = 0;
    for (const TiledComponent& tc : net.parts) sumAreas += tc.W * tc.H;
    double Eg = dirichletEnergy(S.cx, S.pot.g);
    require(relErr(sumAreas, Eg) <= 1e-9, name + " area sum off");
    return Eg;
  };
  double Eq = checkOne("FIX-QUAD");
  require(relErr(Eq, E.val()) <= 1e-9, "FIX-QUAD vs 13/11");
  for (const char* name : kFixtures)
    if (std::string(name) != "FIX-QUAD") checkOne(name);
  for (int seed = 1; seed <= 100; ++seed)
    for (const char* topo : {"quad", "annulus", "pants"})
      checkOne("random:" + std::to_string(seed) + ":" + topo);
}

// ---- 3: level curves all carry the same flux length ------------------------

void c3() {
  auto S = solved("FIX-QUAD");
  for (int i = 1; i <= 20; ++i) {
    double s = i / 21.0;
    RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {s});
    LevelCurve lc = traceLevelCurve(rc, s);
    require(lc.components.size() == 1,
            "level " + std::to_string(s) + " components");
    double above = fluxLength(rc, lc.components[0], CurveSide::Above);
    double below = fluxLength(rc, lc.components[0], CurveSide::Below);
    require(relErr(above, 13.0 / 11) <= 1e-9, "above at " + std::to_string(s));
    require(relErr(below, 13.0 / 11) <= 1e-9, "below at " + std::to_string(s));
    require(relErr(above, below) <= 1e-9, "antisymmetry at " + std::to_string(s));
  }
}

// ---- 4: Green identity and the dense-elimination oracle --------------------

void c4() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  int networks = 0;
  for (int seed = 1; seed <= 34 && networks < 102; ++seed)
    for (const char* topo : {"quad", "annulus", "pants"}) {
      auto raw = genFixture("random:" + std::to_string(seed) + ":" + topo);
      auto cx = CellComplex::build(raw);
      require(cx.numVertices() <= 200, "network too large");
      std::vector<double> u(cx.numVertices()), v(cx.numVertices());
      for (auto& x : u) x = U(rng);
      for (auto& x : v) x = U(rng);
      std::vector<int> F;
      for (int w = 0; w < cx.numVertices(); ++w)
        if (rng() % 3 == 0) F.push_back(w);
      if (F.empty()) F.push_back(0);
      require(greenIdentityResidual(cx, F, u, v) <= 1e-12,
              "green residual seed " + std::to_string(seed));
      ++networks;
    }
  require(networks >= 100, "not enough networks");

  int small = 0;
  for (int seed = 1; seed <= 100 && small < 30; ++seed)
    for (const char* topo : {"quad", "annulus"}) {
      auto raw = genFixture("random:" + std::to_string(seed) + ":" + topo);
      auto cx = CellComplex::build(raw);
      if (cx.numVertices() > 30) continue;
      auto bs = deriveBoundarySpec(cx, raw);
      auto pot = solveDNBVP(cx, bs);
      auto ref = oracle::denseSolve(cx, bs);
      for (int w = 0; w < cx.numVertices(); ++w)
        require(std::abs(pot.g[w] - ref[w]) <= 1e-10,
                "sparse/dense mismatch seed " + std::to_string(seed));
      ++small;
    }
  require(small >= 30, "not enough small networks");
}

// ---- 5: total boundary flux vanishes ----------------------------------------

void c5() {
  auto checkOne = [](const std::string& name) {
    auto S = solved(name);
    FluxReport rep = checkConsistency(S.cx, S.bs, S.pot);
    double E = dirichletEnergy(S.cx, S.pot.g);
    require(std::abs(rep.total) <= 1e-10 * E / S.bs.k,
            name + " flux total " + std::to_string(rep.total));
  };
  for (const char* name : kFixtures) checkOne(name);
  for (int seed = 1; seed <= 50; ++seed)
    for (const char* topo : {"quad", "annulus", "pants"})
      checkOne("random:" + std::to_string(seed) + ":" + topo);
}

// ---- 6: raster coverage and subdivision invariance --------------------------

struct Extent {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
};

std::map<int, Extent> extentsByEdge(const Decomposition& dec,
                                    const SurfaceNet& net) {
  std::map<int, Extent> out;
  for (const TiledComponent& tc : net.parts)
    for (const RectTile& t : tc.tiles) {
      if (t.degenerate) continue;
      Extent& e = out[dec.rc.segs()[t.seg].hostEdge];
      e.x0 = std::min(e.x0, t.x0);
      e.x1 = std::max(e.x1, t.x1);
      e.y0 = std::min(e.y0, t.y0);
      e.y1 = std::max(e.y1, t.y1);
    }
  return out;
}

void c6() {
  for (const char* name : {"FIX-QUAD", "FIX-CYL"}) {
    auto S = solved(name);
    Decomposition dec = decompose(S.cx, S.bs, S.pot.g);
    SurfaceNet net = assembleSurface(dec, 1000);  // throws on gap/overlap
    for (const TiledComponent& tc : net.parts)
      require(tc.coverage.sampled + tc.coverage.skipped == 1000LL * 1000 &&
                  tc.coverage.sampled > 0,
              std::string(name) + " coverage accounting");
  }

  auto S = solved("FIX-QUAD");
  Decomposition base = decompose(S.cx, S.bs, S.pot.g);
  auto before = extentsByEdge(base, assembleSurface(base, 0));
  for (int e = 0; e < S.cx.numEdges(); ++e) {
    Decomposition dec = decompose(S.cx, S.bs, S.pot.g, false, {{e, 0.5}});
    auto after = extentsByEdge(dec, assembleSurface(dec, 0));
    require(after.size() == before.size(), "edge count changed");
    for (const auto& [edge, bx] : before) {
      const Extent& ax = after.at(edge);
      require(std::abs(ax.x0 - bx.x0) <= 1e-12 &&
                  std::abs(ax.x1 - bx.x1) <= 1e-12 &&
                  std::abs(ax.y0 - bx.y0) <= 1e-12 &&
                  std::abs(ax.y1 - bx.y1) <= 1e-12,
              "extent moved after splitting edge " + std::to_string(e));
    }
  }
}

// ---- 7: gluing lengths and component inventories ----------------------------

void c7() {
  auto kindsPerBand = [](const Decomposition& dec) {
    std::vector<std::multiset<CompKind>> out(dec.bands.size());
    for (const Subdomain& b : dec.bands)
      for (int cid : b.components)
        out[b.index].insert(dec.components[cid].kind);
    return out;
  };
  using K = CompKind;
  struct Row {
    const char* name;
    std::vector<std::multiset<K>> want;
  };
  std::vector<Row> rows = {
      {"FIX-ANN", {{K::Annulus}, {K::SlicedQuadrilateral}}},
      {"FIX-PANTS1",
       {{K::Annulus, K::Annulus}, {K::Annulus}, {K::SlicedQuadrilateral}}},
      {"FIX-PANTS2",
       {{K::Annulus, K::Annulus},
        {K::SlicedQuadrilateral, K::SlicedQuadrilateral},
        {K::Quadrilateral, K::Quadrilateral}}}};
  for (const Row& r : rows) {
    auto S = solved(r.name);
    Decomposition dec = decompose(S.cx, S.bs, S.pot.g);
    require(kindsPerBand(dec) == r.want,
            std::string(r.name) + " component inventory");
    std::vector<GluingEdge> seams = verifyGluing(dec, 1e-9);
    require(!seams.empty(), std::string(r.name) + " no seams");
    for (const GluingEdge& ge : seams)
      require(relErr(ge.lengthBelow, ge.lengthAbove) <= 1e-9,
              std::string(r.name) + " seam length mismatch");
  }
}

// ---- 8: doubling -------------------------------------------------------------

void c8() {
  for (const char* name : kFixtures) {
    auto S = solved(name);
    Decomposition dec = decompose(S.cx, S.bs, S.pot.g);
    SurfaceNet net = assembleSurface(dec, 0);
    DoublingReport rep = doublingReport(net);
    int m = static_cast<int>(S.cx.boundaryLoops().size());
    require(rep.genus == m - 1, std::string(name) + " genus");
    require(rep.area == 2 * net.energy, std::string(name) + " area != 2E");
    for (const ConeEntry& ce : net.cones) {
      bool ok = std::abs(ce.angle - kPi / 2) <= 1e-9 ||
                std::abs(ce.angle - kPi) <= 1e-9;
      if (!ok) {
        double n = ce.angle / (2 * kPi);
        ok = n >= 1 - 1e-9 && std::abs(n - std::round(n)) <= 1e-9;
      }
      require(ok, std::string(name) + " cone angle " +
                      std::to_string(ce.angle));
    }
  }
}

// ---- 9: maximum principle ------------------------------------------------—

void c9() {
  int count = 0;
  for (int seed = 1; seed <= 167; ++seed)
    for (const char* topo : {"quad", "annulus", "pants"}) {
      auto S = solved("random:" + std::to_string(seed) + ":" + topo);
      checkMaxPrinciple(S.cx, S.bs, S.pot.g);  // throws on violation
      ++count;
    }
  require(count >= 500, "not enough instances");
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<void()> fn;
  };
  std::vector<Criterion> cs = {
      {"index totals reproduce the worked examples exactly", c1},
      {"energy equals summed target areas (fixtures + 300 random)", c2},
      {"level-curve flux length constant at 13/11 on the quad", c3},
      {"Green identity <=1e-12; sparse matches dense elimination", c4},
      {"total boundary flux <= 1e-10 E/k on all solved instances", c5},
      {"1000x1000 coverage multiplicity 1; subdivision invariance", c6},
      {"gluing lengths agree 1e-9; component inventories match", c7},
      {"doubling: genus m-1, area 2E, admissible cone angles", c8},
      {"maximum principle on 501 random instances", c9},
  };
  auto t0 = std::chrono::steady_clock::now();
  int failed = 0;
  for (size_t i = 0; i < cs.size(); ++i) {
    auto ti = std::chrono::steady_clock::now();
    std::string verdict = "PASS", detail;
    try {
      cs[i].fn();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string(" -- ") + e.what();
      ++failed;
    }
    double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ti)
            .count();
    std::printf("[%zu/9] %s  %s (%.2fs)%s\n", i + 1, verdict.c_str(),
                cs[i].label, dt, detail.c_str());
  }
  double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("acceptance: %d/9 passed in %.2fs\n",
              static_cast<int>(cs.size()) - failed, total);
  return failed == 0 ? 0 : 1;
}
