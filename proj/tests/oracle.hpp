#pragma once
// Independent reference implementations used only by the tests: exact
// rational Gaussian elimination for the hand-sized fixtures and a dense
// double-precision eliminator for random instances. Deliberately shares no
// code with the library solve path.
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "harmtile/complex.hpp"

namespace oracle {

struct Frac {
  long long n = 0, d = 1;
  Frac() = default;
  Frac(long long v) : n(v) {}
  Frac(long long nn, long long dd) : n(nn), d(dd) { norm(); }
  void norm() {
    if (d == 0) throw std::runtime_error("frac div0");
    if (d < 0) { n = -n; d = -d; }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
  }
  friend Frac operator+(Frac a, Frac b) { return Frac(a.n * b.d + b.n * a.d, a.d * b.d); }
  friend Frac operator-(Frac a, Frac b) { return Frac(a.n * b.d - b.n * a.d, a.d * b.d); }
  friend Frac operator*(Frac a, Frac b) { return Frac(a.n * b.n, a.d * b.d); }
  friend Frac operator/(Frac a, Frac b) { return Frac(a.n * b.d, a.d * b.n); }
  friend bool operator==(Frac a, Frac b) { return a.n == b.n && a.d == b.d; }
  bool zero() const { return n == 0; }
  double val() const { return double(n) / double(d); }
};

// Exact elimination, partial "pivot" = first nonzero.
inline std::vector<Frac> fracGauss(std::vector<std::vector<Frac>> A, std::vector<Frac> b) {
  size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && A[piv][col].zero()) ++piv;
    if (piv == n) throw std::runtime_error("singular");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col].zero()) continue;
      Frac f = A[r][col] / A[col][col];
      for (size_t c = col; c < n; ++c) A[r][c] = A[r][c] - f * A[col][c];
      b[r] = b[r] - f * b[col];
    }
  }
  std::vector<Frac> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

// Dense double-precision solve of the mixed problem straight off the graph:
// eliminate only over non-Dirichlet vertices. Returns per-internal-id values.
inline std::vector<double> denseSolve(const harmtile::CellComplex& cx,
                                      const harmtile::BoundarySpec& bs) {
  using namespace harmtile;
  std::vector<int> free;
  std::vector<int> ix(cx.numVertices(), -1);
  std::vector<double> out(cx.numVertices(), 0.0);
  for (int v = 0; v < cx.numVertices(); ++v) {
    Role r = bs.role[v];
    if (r == Role::DirichletK)
      out[v] = bs.k;
    else if (r == Role::Dirichlet0)
      out[v] = 0.0;
    else {
      ix[v] = static_cast<int>(free.size());
      free.push_back(v);
    }
  }
  size_t n = free.size();
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (auto [e, w] : cx.incidentEdges(free[i])) {
      double c = cx.edge(e).c;
      A[i][i] += c;
      if (ix[w] >= 0)
        A[i][ix[w]] -= c;
      else
        rhs[i] += c * out[w];
    }
  }
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-14) throw std::runtime_error("singular dense system");
    std::swap(A[piv], A[col]);
    std::swap(rhs[piv], rhs[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (size_t i = 0; i < n; ++i) out[free[i]] = rhs[i] / A[i][i];
  return out;
}

// Hand-solved exact potentials for the fixtures, keyed by external id.
// Empty map means "no closed form recorded here".
inline std::map<harmtile::VId, Frac> fixtureExact(const std::string& name) {
  using harmtile::VId;
  std::map<VId, Frac> m;
  if (name == "FIX-QUAD") {
    m = {{0, {0}}, {1, {7, 11}}, {2, {1}}, {3, {0}}, {4, {6, 11}}, {5, {1}}};
  } else if (name == "FIX-ANN") {
    // outer CCW from (2,0): ids 0..7; inner 8..15 all ground
    m = {{0, {1}}, {1, {1}},      {2, {7, 18}}, {3, {1, 6}},
         {4, {1, 9}}, {5, {1, 6}}, {6, {7, 18}}, {7, {1}}};
    for (VId v = 8; v <= 15; ++v) m[v] = Frac(0);
  } else if (name == "FIX-ANN-INNER") {
    for (VId v = 0; v <= 7; ++v) m[v] = Frac(1);
    m[8] = {5, 7};
    m[9] = m[15] = {4, 7};
    m[10] = m[11] = m[12] = m[13] = m[14] = Frac(0);
  } else if (name == "FIX-ANN-BOTH") {
    m = {{0, {1}}, {1, {1}},       {2, {14, 33}}, {3, {3, 11}},
         {4, {8, 33}}, {5, {3, 11}}, {6, {14, 33}}, {7, {1}},
         {8, {0}}, {9, {0}}, {10, {0}}, {11, {5, 33}},
         {12, {2, 11}}, {13, {5, 33}}, {14, {0}}, {15, {0}}};
  }
  return m;
}

inline bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace oracle
