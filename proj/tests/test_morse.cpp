#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "harmtile/bvp.hpp"
#include "harmtile/complex.hpp"
#include "harmtile/errors.hpp"
#include "harmtile/fixtures.hpp"
#include "harmtile/morse.hpp"
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

// square with a hub: four triangles around vertex 4
CellComplex wheel() {
  RawComplex raw;
  raw.vertices = {{0, 0, 0}, {1, 1, 0}, {2, 1, 1}, {3, 0, 1}, {4, 0.5, 0.5}};
  raw.edges = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1},
               {0, 4, 1}, {1, 4, 1}, {2, 4, 1}, {3, 4, 1}};
  raw.cells = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  return CellComplex::build(raw);
}

int rvOf(const RefinedComplex& rc, VId ext) {
  int want = rc.base().internalId(ext);
  for (int i = 0; i < static_cast<int>(rc.verts().size()); ++i)
    if (rc.verts()[i].kind == RVKind::Original && rc.verts()[i].orig == want)
      return i;
  REQUIRE(false);
  return -1;
}

}  // namespace

TEST_CASE("sign changes around interior and boundary stars") {
  CellComplex cx = wheel();
  std::vector<double> g = {1, 0, 1, 0, 0.5};
  CHECK(signChanges(cx, g, cx.internalId(4), 1e-9) == 4);
  CHECK(vertexIndex(cx, g, cx.internalId(4), 1e-9) == -1.0);

  // corner 0 fan is [1, 4, 3]: diffs (+,-,-) against g=0.5 -> one change
  std::vector<double> h = {0.5, 1, 0, 0.2, 0.3};
  CHECK(signChanges(cx, h, cx.internalId(0), 1e-9) == 1);
  CHECK(vertexIndex(cx, h, cx.internalId(0), 1e-9) == 0.0);

  // regular interior vertex
  std::vector<double> m = {1, 1, 0, 0, 0.5};
  CHECK(signChanges(cx, m, cx.internalId(4), 1e-9) == 2);
  CHECK(vertexIndex(cx, m, cx.internalId(4), 1e-9) == 0.0);
}

TEST_CASE("ties are a hard error unless perturbation is on") {
  CellComplex cx = wheel();
  std::vector<double> g = {0.5, 1, 0, 0.2, 0.5};  // vertex 0 ties the hub
  CHECK_THROWS_AS(signChanges(cx, g, cx.internalId(4), 1e-9), TieError);
  // perturbed order breaks the tie by id: 0 < 4, so the hub sees (-) there
  CHECK_NOTHROW(signChanges(cx, g, cx.internalId(4), 1e-9, true));
  CHECK(signChanges(cx, g, cx.internalId(4), 1e-9, true) == 2);
}

TEST_CASE("FIX-QUAD star fan and index") {
  auto S = solved("FIX-QUAD");
  // vertex 1 fan runs [2, 4, 0]: diffs (+,-,-)
  CHECK(signChanges(S.cx, S.pot.g, S.cx.internalId(1), 1e-9) == 1);
  CHECK(vertexIndex(S.cx, S.pot.g, S.cx.internalId(1), 1e-9) == 0.0);

  IndexReport rep = indexFormulaCheck(S.cx, S.bs, S.pot.g);
  CHECK(rep.totalIndex == 0.0);
  CHECK(rep.expected == 0.0);
  CHECK(rep.arcEndpointCount == 4);
  CHECK(rep.interiorSingular.empty());
  CHECK(rep.boundarySingular.empty());
}

TEST_CASE("index totals across the fixture family") {
  struct Row {
    const char* name;
    double total;
    int nInterior, nBoundary;
  };
  const Row rows[] = {
      {"FIX-QUAD", 0.0, 0, 0},        {"FIX-ANN", -0.5, 0, 1},
      {"FIX-ANN-INNER", -0.5, 0, 1},  {"FIX-ANN-BOTH", -1.0, 0, 2},
      {"FIX-CYL", 0.0, 0, 0},         {"FIX-PANTS1", -1.5, 1, 1},
      {"FIX-PANTS2", -2.0, 1, 2},
  };
  for (const Row& r : rows) {
    CAPTURE(r.name);
    auto S = solved(r.name);
    IndexReport rep = indexFormulaCheck(S.cx, S.bs, S.pot.g);
    CHECK(rep.totalIndex == r.total);
    CHECK(rep.expected == r.total);
    CHECK(static_cast<int>(rep.interiorSingular.size()) == r.nInterior);
    CHECK(static_cast<int>(rep.boundarySingular.size()) == r.nBoundary);
    for (const auto& [v, e] : rep.perVertex)
      if (!S.cx.isBoundary(S.cx.internalId(v))) CHECK(e.index <= 0.0);
  }
}

TEST_CASE("FIX-ANN singular vertex sits at (-2,0) with value 1/9") {
  auto S = solved("FIX-ANN");
  IndexReport rep = indexFormulaCheck(S.cx, S.bs, S.pot.g);
  REQUIRE(rep.boundarySingular.size() == 1);
  CHECK(rep.boundarySingular[0] == 4);
  CHECK(S.pot.g[S.cx.internalId(4)] == doctest::Approx(1.0 / 9).epsilon(1e-12));
  CHECK(rep.perVertex.at(4).sgc == 2);
  CHECK(rep.perVertex.at(4).index == -0.5);
}

TEST_CASE("index identity holds on random instances") {
  for (int seed = 1; seed <= 8; ++seed)
    for (const char* topo : {"quad", "annulus", "pants"}) {
      auto S = solved("random:" + std::to_string(seed) + ":" + topo);
      CHECK_NOTHROW(indexFormulaCheck(S.cx, S.bs, S.pot.g));
    }
}

TEST_CASE("level curve across FIX-QUAD is one boundary-to-boundary arc") {
  auto S = solved("FIX-QUAD");
  RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {0.25});
  LevelCurve lc = traceLevelCurve(rc, 0.25);
  REQUIRE(lc.components.size() == 1);
  const CurveComponent& c = lc.components[0];
  CHECK_FALSE(c.closed);
  CHECK(c.nodes.size() == 3);  // two crossings joined through the diagonal
  CHECK(rc.onBoundary(c.nodes.front()));
  CHECK(rc.onBoundary(c.nodes.back()));
  CHECK(c.singular.empty());

  // middle band: the curve picks up the interior vertical edge
  RefinedComplex rc2 = refineAtLevels(S.cx, S.bs, S.pot.g, {0.6});
  LevelCurve lc2 = traceLevelCurve(rc2, 0.6);
  REQUIRE(lc2.components.size() == 1);
  CHECK(lc2.components[0].nodes.size() == 3);
  CHECK_THROWS_AS(traceLevelCurve(rc2, 0.3), ValidationError);
}

TEST_CASE("level curve through the FIX-ANN singular vertex") {
  auto S = solved("FIX-ANN");
  double us = S.pot.g[S.cx.internalId(4)];
  RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {us});
  LevelCurve lc = traceLevelCurve(rc, us);
  REQUIRE(lc.components.size() == 1);
  const CurveComponent& c = lc.components[0];
  CHECK(c.closed);
  REQUIRE(lc.singularVertices.size() == 1);
  int sv = lc.singularVertices[0];
  CHECK(rc.verts()[sv].orig == S.cx.internalId(4));
  // exactly two arcs meet there
  int visits = 0;
  for (int n : c.nodes)
    if (n == sv) ++visits;
  CHECK(visits == 1);  // a through-point on the closed walk

  // below the singular value the curve circles the hole untouched
  RefinedComplex rc2 = refineAtLevels(S.cx, S.bs, S.pot.g, {0.05});
  LevelCurve lc2 = traceLevelCurve(rc2, 0.05);
  REQUIRE(lc2.components.size() == 1);
  CHECK(lc2.components[0].closed);
  CHECK(lc2.components[0].singular.empty());

  // above it the curve is pinned to the outer Neumann boundary instead
  RefinedComplex rc3 = refineAtLevels(S.cx, S.bs, S.pot.g, {0.5});
  LevelCurve lc3 = traceLevelCurve(rc3, 0.5);
  REQUIRE(lc3.components.size() == 1);
  CHECK_FALSE(lc3.components[0].closed);
  CHECK(rc3.onBoundary(lc3.components[0].nodes.front()));
  CHECK(rc3.onBoundary(lc3.components[0].nodes.back()));
}

TEST_CASE("flux length equals the quadrilateral height on both sides") {
  auto S = solved("FIX-QUAD");
  for (double s : {0.05, 0.25, 0.5, 6.0 / 11 + 0.01, 0.6, 0.7, 0.95}) {
    RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {s});
    LevelCurve lc = traceLevelCurve(rc, s);
    double above = 0, below = 0;
    for (const CurveComponent& c : lc.components) {
      above += fluxLength(rc, c, CurveSide::Above);
      below += fluxLength(rc, c, CurveSide::Below);
    }
    CHECK(above == doctest::Approx(13.0 / 11).epsilon(1e-12));
    CHECK(below == doctest::Approx(13.0 / 11).epsilon(1e-12));
  }
}

TEST_CASE("flux length of a constant boundary arc") {
  auto S = solved("FIX-ANN");
  RefinedComplex rc = refineAtLevels(S.cx, S.bs, S.pot.g, {});
  CurveComponent alpha;
  alpha.value = S.bs.k;
  for (VId v : {7, 0, 1}) alpha.nodes.push_back(rvOf(rc, v));
  CHECK(fluxLength(rc, alpha, CurveSide::Below) ==
        doctest::Approx(dirichletEnergy(S.cx, S.pot.g) / S.bs.k).epsilon(1e-12));
  CHECK_THROWS_AS(fluxLength(rc, alpha, CurveSide::Above), SideUndefined);

  // mid levels of the annulus measure the same circumference
  double C = dirichletEnergy(S.cx, S.pot.g) / S.bs.k;
  for (double s : {0.2, 0.5, 0.8}) {
    RefinedComplex rcs = refineAtLevels(S.cx, S.bs, S.pot.g, {s});
    LevelCurve lc = traceLevelCurve(rcs, s);
    double tot = 0;
    for (const CurveComponent& c : lc.components)
      tot += fluxLength(rcs, c, CurveSide::Above);
    CHECK(tot == doctest::Approx(C).epsilon(1e-12));
  }
}
