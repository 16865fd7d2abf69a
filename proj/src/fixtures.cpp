#include "harmtile/fixtures.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "harmtile/errors.hpp"

namespace harmtile {

namespace {

struct Builder {
  RawComplex raw;
  std::map<std::pair<VId, VId>, size_t> edgeIx;

  void vertex(VId id, double x, double y) { raw.vertices.push_back({id, x, y}); }

  void edge(VId u, VId v, double c = 1.0) {
    auto key = std::minmax(u, v);
    if (edgeIx.count(key)) return;
    edgeIx[key] = raw.edges.size();
    raw.edges.push_back({u, v, c});
  }

  void setC(VId u, VId v, double c) {
    auto it = edgeIx.find(std::minmax(u, v));
    if (it == edgeIx.end()) throw ValidationError("setC on missing edge");
    raw.edges[it->second].c = c;
  }

  void quad(VId a, VId b, VId c, VId d) {
    edge(a, b);
    edge(b, c);
    edge(c, d);
    edge(d, a);
    raw.cells.push_back({a, b, c, d});
  }
};

// Rectangular grid, id = (y - y0) * W + (x - x0), unit cells, unit conductance.
// Holes: list of cell anchors (x, y) to omit.
Builder grid(int x0, int x1, int y0, int y1, const std::set<std::pair<int, int>>& holes = {}) {
  Builder b;
  int W = x1 - x0 + 1;
  auto id = [&](int x, int y) { return VId(y - y0) * W + (x - x0); };
  // skip vertices interior to a hole block (none of our holes have interior vertices,
  // but guard anyway: a vertex survives iff it touches a kept cell)
  std::set<VId> used;
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      if (holes.count({x, y})) continue;
      used.insert(id(x, y));
      used.insert(id(x + 1, y));
      used.insert(id(x + 1, y + 1));
      used.insert(id(x, y + 1));
    }
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (used.count(id(x, y))) b.vertex(id(x, y), x, y);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) {
      if (holes.count({x, y})) continue;
      b.quad(id(x, y), id(x + 1, y), id(x + 1, y + 1), id(x, y + 1));
    }
  return b;
}

// Concentric square rings r=1 (inner) and r=2 (outer), 8 vertices each.
// Outer ids 0..7 CCW from (2,0); inner ids 8..15 CCW from (1,0).
Builder squareAnnulus() {
  Builder b;
  const double ox[8] = {2, 2, 0, -2, -2, -2, 0, 2};
  const double oy[8] = {0, 2, 2, 2, 0, -2, -2, -2};
  for (int i = 0; i < 8; ++i) b.vertex(i, ox[i], oy[i]);
  for (int i = 0; i < 8; ++i) b.vertex(8 + i, ox[i] / 2, oy[i] / 2);
  for (int i = 0; i < 8; ++i) {
    int j = (i + 1) % 8;
    b.quad(i, j, 8 + j, 8 + i);
  }
  return b;
}

std::vector<VId> range(VId a, VId bIncl, VId step = 1) {
  std::vector<VId> out;
  for (VId v = a; step > 0 ? v <= bIncl : v >= bIncl; v += step) out.push_back(v);
  return out;
}

RawComplex fixQuad() {
  Builder b = grid(0, 2, 0, 1);
  b.setC(1, 2, 2.0);
  b.raw.k = 1.0;
  b.raw.boundaryLoops = {{0, 1, 2, 5, 4, 3}};
  b.raw.alphaArcs = {{2, 5}};
  b.raw.betaArcs = {{1}, {4}};
  return b.raw;
}

RawComplex fixAnn() {
  Builder b = squareAnnulus();
  b.raw.k = 1.0;
  b.raw.boundaryLoops = {range(0, 7), range(8, 15)};
  b.raw.alphaArcs = {{7, 0, 1}};
  // inner ring is all ground by default; left outer arc is Neumann
  return b.raw;
}

RawComplex fixAnnInner() {
  Builder b = squareAnnulus();
  b.raw.k = 1.0;
  b.raw.boundaryLoops = {range(0, 7), range(8, 15)};
  b.raw.alphaArcs = {range(0, 7)};  // whole outer circle
  b.raw.betaArcs = {{15, 8, 9}};    // right inner arc reflects
  return b.raw;
}

RawComplex fixAnnBoth() {
  Builder b = squareAnnulus();
  b.raw.k = 1.0;
  b.raw.boundaryLoops = {range(0, 7), range(8, 15)};
  b.raw.alphaArcs = {{7, 0, 1}};
  b.raw.betaArcs = {{11, 12, 13}};  // left inner arc
  return b.raw;
}

RawComplex fixCyl() {
  Builder b = squareAnnulus();
  b.raw.k = 1.0;
  b.raw.boundaryLoops = {range(0, 7), range(8, 15)};
  b.raw.alphaArcs = {range(0, 7)};
  return b.raw;
}

// 7x5 grid on [-3,3]x[-2,2] with 2x1-cell holes at x in [-2,-1] and [1,2],
// y in [-1,1]. Neumann window = bottom-center three vertices; the rest of the
// outer rectangle carries the constant k.
RawComplex fixPants1() {
  std::set<std::pair<int, int>> holes = {{-2, -1}, {-2, 0}, {1, -1}, {1, 0}};
  Builder b = grid(-3, 3, -2, 2, holes);
  auto id = [](int x, int y) { return VId(y + 2) * 7 + (x + 3); };
  b.raw.k = 1.0;
  std::vector<VId> outer;
  for (int x = -3; x < 3; ++x) outer.push_back(id(x, -2));
  for (int y = -2; y < 2; ++y) outer.push_back(id(3, y));
  for (int x = 3; x > -3; --x) outer.push_back(id(x, 2));
  for (int y = 2; y > -2; --y) outer.push_back(id(-3, y));
  std::vector<VId> holeL = {id(-2, -1), id(-1, -1), id(-1, 0), id(-1, 1), id(-2, 1), id(-2, 0)};
  std::vector<VId> holeR = {id(1, -1), id(2, -1), id(2, 0), id(2, 1), id(1, 1), id(1, 0)};
  b.raw.boundaryLoops = {outer, holeL, holeR};
  std::vector<VId> alpha;  // outer loop minus the window {(-1,-2),(0,-2),(1,-2)}
  for (int x = 2; x <= 3; ++x) alpha.push_back(id(x, -2));
  for (int y = -1; y <= 2; ++y) alpha.push_back(id(3, y));
  for (int x = 2; x >= -3; --x) alpha.push_back(id(x, 2));
  for (int y = 1; y >= -2; --y) alpha.push_back(id(-3, y));
  alpha.push_back(id(-2, -2));
  b.raw.alphaArcs = {alpha};
  b.raw.betaArcs = {{id(-1, -2), id(0, -2), id(1, -2)}};
  return b.raw;
}

// 5x7 grid on [-2,2]x[-3,3] with 2x1-cell holes at y in [1,2] and [-2,-1],
// x in [-1,1]. Side columns carry k, top and bottom rows reflect. The middle
// row gets conductance 4 so the saddle between the holes sits above the two
// boundary-singular values (they are equal by symmetry but lie on distinct
// level curves).
RawComplex fixPants2() {
  std::set<std::pair<int, int>> holes = {{-1, 1}, {0, 1}, {-1, -2}, {0, -2}};
  Builder b = grid(-2, 2, -3, 3, holes);
  auto id = [](int x, int y) { return VId(y + 3) * 5 + (x + 2); };
  for (int x = -2; x < 2; ++x) b.setC(id(x, 0), id(x + 1, 0), 4.0);
  b.raw.k = 1.0;
  std::vector<VId> outer;
  for (int x = -2; x < 2; ++x) outer.push_back(id(x, -3));
  for (int y = -3; y < 3; ++y) outer.push_back(id(2, y));
  for (int x = 2; x > -2; --x) outer.push_back(id(x, 3));
  for (int y = 3; y > -3; --y) outer.push_back(id(-2, y));
  std::vector<VId> holeT = {id(-1, 1), id(0, 1), id(1, 1), id(1, 2), id(0, 2), id(-1, 2)};
  std::vector<VId> holeB = {id(-1, -2), id(0, -2), id(1, -2), id(1, -1), id(0, -1), id(-1, -1)};
  b.raw.boundaryLoops = {outer, holeT, holeB};
  std::vector<VId> aR, aL;
  for (int y = -2; y <= 2; ++y) aR.push_back(id(2, y));
  for (int y = -2; y <= 2; ++y) aL.push_back(id(-2, y));
  b.raw.alphaArcs = {aR, aL};
  std::vector<VId> top, bot;
  for (int x = -2; x <= 2; ++x) top.push_back(id(x, 3));
  for (int x = -2; x <= 2; ++x) bot.push_back(id(x, -3));
  b.raw.betaArcs = {top, bot};
  return b.raw;
}

// Polar annulus mesh: `rings` concentric circles of `sectors` vertices.
Builder polarAnnulus(int rings, int sectors) {
  Builder b;
  auto id = [&](int r, int j) { return VId(r) * sectors + (j % sectors); };
  for (int r = 0; r < rings; ++r)
    for (int j = 0; j < sectors; ++j) {
      double th = 2.0 * M_PI * j / sectors;
      double rad = 1.0 + r;
      b.vertex(id(r, j), rad * std::cos(th), rad * std::sin(th));
    }
  for (int r = 0; r + 1 < rings; ++r)
    for (int j = 0; j < sectors; ++j)
      b.quad(id(r, j), id(r + 1, j), id(r + 1, j + 1), id(r, j + 1));
  return b;
}

RawComplex randomFixture(uint64_t seed, const std::string& topology) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  std::uniform_real_distribution<double> logc(-0.8, 0.8);
  auto rc = [&] { return std::exp(logc(rng)); };
  RawComplex raw;
  if (topology == "quad") {
    std::uniform_int_distribution<int> dim(2, 6);
    int W = dim(rng), H = dim(rng);
    Builder b = grid(0, W, 0, H);
    auto id = [&](int x, int y) { return VId(y) * (W + 1) + x; };
    std::vector<VId> loop;
    for (int x = 0; x < W; ++x) loop.push_back(id(x, 0));
    for (int y = 0; y < H; ++y) loop.push_back(id(W, y));
    for (int x = W; x > 0; --x) loop.push_back(id(x, H));
    for (int y = H; y > 0; --y) loop.push_back(id(0, y));
    b.raw.boundaryLoops = {loop};
    b.raw.alphaArcs = {range(id(W, 0), id(W, H), W + 1)};
    b.raw.betaArcs = {range(id(1, 0), id(W - 1, 0)), range(id(1, H), id(W - 1, H))};
    raw = b.raw;
  } else if (topology == "annulus") {
    std::uniform_int_distribution<int> nr(2, 4), ns(6, 10);
    int R = nr(rng), S = ns(rng);
    Builder b = polarAnnulus(R, S);
    b.raw.boundaryLoops = {range(VId(R - 1) * S, VId(R) * S - 1), range(0, S - 1)};
    std::uniform_int_distribution<int> arcLen(1, S - 1);
    int len = arcLen(rng);
    std::vector<VId> alpha;
    for (int j = 0; j < len; ++j) alpha.push_back(VId(R - 1) * S + j);
    b.raw.alphaArcs = {alpha};
    raw = b.raw;
  } else if (topology == "pants") {
    raw = fixPants1();
  } else {
    throw UnknownFixture("unknown random topology '" + topology + "'");
  }
  for (auto& e : raw.edges) e.c = rc();
  raw.k = 1.0;
  return raw;
}

}  // namespace

RawComplex genFixture(const std::string& name) {
  if (name == "FIX-QUAD") return fixQuad();
  if (name == "FIX-ANN") return fixAnn();
  if (name == "FIX-ANN-INNER") return fixAnnInner();
  if (name == "FIX-ANN-BOTH") return fixAnnBoth();
  if (name == "FIX-CYL") return fixCyl();
  if (name == "FIX-PANTS1") return fixPants1();
  if (name == "FIX-PANTS2") return fixPants2();
  if (name.rfind("random:", 0) == 0) {
    std::string rest = name.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw UnknownFixture("random fixture wants random:<seed>:<topology>");
    uint64_t seed = 0;
    std::istringstream ss(rest.substr(0, colon));
    if (!(ss >> seed)) throw UnknownFixture("bad random seed '" + rest + "'");
    return randomFixture(seed, rest.substr(colon + 1));
  }
  throw UnknownFixture("unknown fixture '" + name + "'");
}

}  // namespace harmtile
