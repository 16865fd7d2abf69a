#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "harmtile/bvp.hpp"
#include "harmtile/complex.hpp"
#include "harmtile/fixtures.hpp"
#include "harmtile/refine.hpp"
#include "oracle.hpp"

using namespace harmtile;

namespace {

struct Solved {
  CellComplex cx;
  BoundarySpec bs;
  Potential pot;
};

Solved solved(const std::string& name) {
  RawComplex raw = genFixture(name);
  CellComplex cx = CellComplex::build(raw);
  BoundarySpec bs = deriveBoundarySpec(cx, raw);
  Potential pot = solveDNBVP(cx, bs);
  return {std::move(cx), std::move(bs), std::move(pot)};
}

// re-solve the refined network from scratch; the extension must be the
// harmonic solution of the refined problem
void checkResolve(const RefinedComplex& rc, double tol = 1e-10) {
  RawComplex raw = rc.exportGraph();
  CellComplex gx = CellComplex::build(raw, Validate::GraphOnly);
  BoundarySpec bs2;
  bs2.k = rc.boundary().k;
  bs2.role.assign(gx.numVertices(), Role::Interior);
  const CellComplex& base = rc.base();
  for (int v = 0; v < base.numVertices(); ++v)
    bs2.role[gx.internalId(base.externalId(v))] = rc.boundary().role[v];
  Potential sol = solveDNBVP(gx, bs2);
  std::vector<double> want = rc.extendedG();
  REQUIRE(sol.g.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i)
    CHECK(std::abs(sol.g[i] - want[i]) < tol);
}

double segEnergy(const RefinedComplex& rc) {
  double e = 0;
  for (const Seg& s : rc.segs()) {
    double d = rc.gAt(s.a) - rc.gAt(s.b);
    e += s.c * d * d;
  }
  return e;
}

RawComplex unitSquare() {
  RawComplex raw;
  raw.vertices = {{0, 0, 0}, {1, 1, 0}, {2, 1, 1}, {3, 0, 1}};
  raw.edges = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}};
  raw.cells = {{0, 1, 2, 3}};
  raw.alphaArcs = {{1, 2}};  // right side at k, left side grounded
  return raw;
}

}  // namespace

TEST_CASE("affine extension inside cells") {
  auto S = solved("FIX-QUAD");
  // on-edge point: plain linear interpolation
  CHECK(affineValueAt(S.cx, S.pot.g, {0.5, 0}) == doctest::Approx(7.0 / 22).epsilon(1e-12));
  CHECK(affineValueAt(S.cx, S.pot.g, {1.5, 0}) == doctest::Approx((7.0 / 11 + 1) / 2).epsilon(1e-12));
  // centroid of triangle (0,0),(1,0),(1,1): mean of corner values
  CHECK(affineValueAt(S.cx, S.pot.g, {2.0 / 3, 1.0 / 3}) ==
        doctest::Approx((0 + 7.0 / 11 + 6.0 / 11) / 3).epsilon(1e-12));
  // vertices reproduce g
  for (int v = 0; v < S.cx.numVertices(); ++v)
    CHECK(affineValueAt(S.cx, S.pot.g, S.cx.position(v)) ==
          doctest::Approx(S.pot.g[v]).epsilon(1e-12));
  CHECK_THROWS_AS(affineValueAt(S.cx, S.pot.g, {10, 10}), OutsideComplex);
}

TEST_CASE("type I insertion at s=0.25 on FIX-QUAD") {
  auto S = solved("FIX-QUAD");
  RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {0.25});
  CHECK(rc.typeICount() == 2);

  // the two crossings sit on the bottom-left and top-left horizontal edges
  std::set<int> hosts;
  for (const auto& rv : rc.verts())
    if (rv.kind == RVKind::TypeI) {
      hosts.insert(rv.hostEdge);
      CHECK(rv.g == doctest::Approx(0.25));
    }
  std::set<int> want = {S.cx.edgeBetween(S.cx.internalId(0), S.cx.internalId(1)),
                        S.cx.edgeBetween(S.cx.internalId(3), S.cx.internalId(4))};
  CHECK(hosts == want);

  // modified conductance on the upper piece of the 0 -> 7/11 edge
  int e01 = S.cx.edgeBetween(S.cx.internalId(0), S.cx.internalId(1));
  REQUIRE(rc.segsOfEdge(e01).size() == 2);
  const Seg& hiHalf = rc.segs()[rc.segsOfEdge(e01)[1]];
  CHECK(hiHalf.c == doctest::Approx((7.0 / 11) / (7.0 / 11 - 0.25)).epsilon(1e-12));
  // both pieces carry the original current
  for (int sIx : rc.segsOfEdge(e01)) {
    const Seg& sg = rc.segs()[sIx];
    CHECK(sg.c * std::abs(rc.gAt(sg.a) - rc.gAt(sg.b)) ==
          doctest::Approx(7.0 / 11).epsilon(1e-12));
  }

  CHECK(segEnergy(rc) == doctest::Approx(13.0 / 11).epsilon(1e-12));
  checkResolve(rc);
}

TEST_CASE("levels at 0 and k insert nothing") {
  auto S = solved("FIX-QUAD");
  RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {});
  RefinedComplex rc2 = insertLevelVertices(rc, 1.0);
  CHECK(rc2.typeICount() == 0);
  CHECK(rc2.levels().empty());
  RefinedComplex rc3 = insertLevelVertices(rc, 0.0);
  CHECK(rc3.typeICount() == 0);
  // a level through an existing vertex value adds vertices only on
  // transversal edges, not at the coinciding vertex
  RefinedComplex rc4 = insertLevelVertices(rc, 7.0 / 11);
  for (const auto& rv : rc4.verts())
    if (rv.kind == RVKind::TypeI) CHECK(rv.t > 1e-9);
  CHECK(rc4.typeICount() == 1);  // only (4,5) crosses strictly
  checkResolve(rc4);
}

TEST_CASE("symmetric split of a unit edge") {
  RawComplex raw = unitSquare();
  CellComplex cx = CellComplex::build(raw);
  BoundarySpec bs = deriveBoundarySpec(cx, raw);
  Potential pot = solveDNBVP(cx, bs);
  RefinedComplex rc = refineAtLevels(cx, bs, pot.g, {0.5});
  CHECK(rc.typeICount() == 2);
  for (const Seg& s : rc.segs()) {
    if (rc.verts()[s.a].kind == RVKind::Original &&
        rc.verts()[s.b].kind == RVKind::Original)
      continue;  // the two constant sides
    CHECK(s.c == doctest::Approx(2.0));
    CHECK(s.c * std::abs(rc.gAt(s.a) - rc.gAt(s.b)) == doctest::Approx(1.0));
  }
  checkResolve(rc);
}

TEST_CASE("degenerate level along an interior edge") {
  // 2x1 grid: the middle column sits at value 1/2 on both rows
  RawComplex raw;
  raw.vertices = {{0, 0, 0}, {1, 1, 0}, {2, 2, 0},
                  {3, 0, 1}, {4, 1, 1}, {5, 2, 1}};
  raw.edges = {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}, {4, 5, 1},
               {0, 3, 1}, {1, 4, 1}, {2, 5, 1}};
  raw.cells = {{0, 1, 4, 3}, {1, 2, 5, 4}};
  raw.alphaArcs = {{2, 5}};
  raw.betaArcs = {{1}, {4}};
  CellComplex cx = CellComplex::build(raw);
  BoundarySpec bs = deriveBoundarySpec(cx, raw);
  Potential pot = solveDNBVP(cx, bs);
  CHECK(pot.g[cx.internalId(1)] == doctest::Approx(0.5));
  CHECK_THROWS_AS(refineAtLevels(cx, bs, pot.g, {0.5}), DegenerateLevel);
  // a level clear of the tie is fine
  CHECK_NOTHROW(refineAtLevels(cx, bs, pot.g, {0.25}));
}

TEST_CASE("type II padding between consecutive levels") {
  auto S = solved("FIX-QUAD");
  RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {});
  RefinedComplex padded = padCombinatorialDistance(rc, {7.0 / 11, 6.0 / 11});
  CHECK(padded.typeIICount() == 1);  // only the middle vertical edge joins them
  CHECK(segEnergy(padded) == doctest::Approx(13.0 / 11).epsilon(1e-12));
  checkResolve(padded);

  // distance is now >= 2: no segment joins the two level sets directly
  for (const Seg& s : padded.segs()) {
    bool aAt7 = std::abs(padded.gAt(s.a) - 7.0 / 11) < 1e-9;
    bool bAt6 = std::abs(padded.gAt(s.b) - 6.0 / 11) < 1e-9;
    bool aAt6 = std::abs(padded.gAt(s.a) - 6.0 / 11) < 1e-9;
    bool bAt7 = std::abs(padded.gAt(s.b) - 7.0 / 11) < 1e-9;
    CHECK_FALSE((aAt7 && bAt6));
    CHECK_FALSE((aAt6 && bAt7));
  }
}

TEST_CASE("midpoint subdivision halves resistance") {
  RawComplex raw = unitSquare();
  CellComplex cx = CellComplex::build(raw);
  BoundarySpec bs = deriveBoundarySpec(cx, raw);
  Potential pot = solveDNBVP(cx, bs);
  RefinedComplex rc = refineAtLevels(cx, bs, pot.g, {});
  int bottom = cx.edgeBetween(cx.internalId(0), cx.internalId(1));
  RefinedComplex sub = subdivideEdge(rc, bottom, 0.5);
  CHECK(sub.typeIICount() == 1);
  REQUIRE(sub.segsOfEdge(bottom).size() == 2);
  for (int sIx : sub.segsOfEdge(bottom)) {
    const Seg& sg = sub.segs()[sIx];
    CHECK(sg.c == doctest::Approx(2.0));
    CHECK(std::abs(sub.gAt(sg.a) - sub.gAt(sg.b)) == doctest::Approx(0.5));
  }
  CHECK(segEnergy(sub) == doctest::Approx(segEnergy(rc)).epsilon(1e-12));
  checkResolve(sub);
}

TEST_CASE("lifted cells partition each triangle by bands") {
  auto S = solved("FIX-QUAD");
  RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {0.25});
  REQUIRE(rc.levels().size() == 1);
  CHECK(rc.bandLo(0) == 0.0);
  CHECK(rc.bandHi(0) == doctest::Approx(0.25));
  CHECK(rc.bandHi(1) == doctest::Approx(1.0));

  int diagCount = 0;
  for (const auto& rv : rc.verts())
    if (rv.kind == RVKind::Diagonal) ++diagCount;
  CHECK(diagCount == 1);  // the 0 -> 6/11 diagonal of the left cell

  int band0 = 0, band1 = 0;
  for (const auto& lc : rc.lifted()) {
    (lc.band == 0 ? band0 : band1)++;
    // band bounds hold on every node
    for (const Side& sd : lc.sides) {
      CHECK(rc.gAt(sd.a) >= rc.bandLo(lc.band) - 1e-9);
      CHECK(rc.gAt(sd.a) <= rc.bandHi(lc.band) + 1e-9);
    }
    // edge sides reference their segment endpoints exactly
    for (const Side& sd : lc.sides)
      if (sd.kind == SideKind::Edge) {
        const Seg& sg = rc.segs()[sd.host];
        CHECK(((sg.a == sd.a && sg.b == sd.b) || (sg.a == sd.b && sg.b == sd.a)));
      }
  }
  CHECK(band0 == 2);
  CHECK(band1 == 4);
}

TEST_CASE("refinement preserves the euler characteristic") {
  for (const char* name : {"FIX-QUAD", "FIX-ANN", "FIX-PANTS1", "FIX-PANTS2"}) {
    auto S = solved(name);
    // cut at a few generic interior levels
    RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {0.111, 0.444, 0.777});
    std::set<std::pair<int, int>> sideSet;
    for (const auto& lc : rc.lifted())
      for (const Side& sd : lc.sides)
        sideSet.insert({std::min(sd.a, sd.b), std::max(sd.a, sd.b)});
    std::set<int> used;
    for (const auto& lc : rc.lifted())
      for (const Side& sd : lc.sides) used.insert(sd.a);
    int V = static_cast<int>(used.size());
    int E = static_cast<int>(sideSet.size());
    int F = static_cast<int>(rc.lifted().size());
    CHECK(V - E + F == S.cx.eulerCharacteristic());
    checkResolve(rc);
    CHECK(segEnergy(rc) ==
          doctest::Approx(dirichletEnergy(S.cx, S.pot.g)).epsilon(1e-11));
  }
}

TEST_CASE("refinement on random instances keeps the solution") {
  for (int seed : {3, 4, 5}) {
    for (const char* topo : {"quad", "annulus", "pants"}) {
      auto S = solved("random:" + std::to_string(seed) + ":" + std::string(topo));
      double k = S.bs.k;
      RefinedComplex rc =
          refineAtLevels(S.cx, S.bs, S.pot.g, {0.2 * k, 0.5 * k, 0.8 * k});
      checkResolve(rc, 1e-9 * std::max(1.0, k));
      CHECK(segEnergy(rc) ==
            doctest::Approx(dirichletEnergy(S.cx, S.pot.g)).epsilon(1e-10));
    }
  }
}
