#include "harmtile/bvp.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

namespace harmtile {

double laplacianAt(const CellComplex& cx, const std::vector<double>& u, int v) {
  double acc = 0;
  for (auto [e, w] : cx.incidentEdges(v)) acc += cx.edge(e).c * (u[v] - u[w]);
  return acc;
}

Potential solveDNBVP(const CellComplex& cx, const BoundarySpec& bs, double tolRel) {
  const int n = cx.numVertices();
  std::vector<int> freeIdx(n, -1);
  std::vector<int> freeVerts;
  for (int v = 0; v < n; ++v)
    if (bs.role[v] == Role::Interior || bs.role[v] == Role::Neumann) {
      freeIdx[v] = static_cast<int>(freeVerts.size());
      freeVerts.push_back(v);
    }

  // every free vertex must reach a Dirichlet vertex through free ones
  {
    std::vector<char> reach(n, 0);
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
      if (freeIdx[v] < 0) {
        reach[v] = 1;
        stack.push_back(v);
      }
    if (stack.empty()) throw SingularSystem("no Dirichlet vertices");
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (auto [e, w] : cx.incidentEdges(v))
        if (!reach[w]) {
          reach[w] = 1;
          stack.push_back(w);
        }
    }
    for (int v = 0; v < n; ++v)
      if (!reach[v])
        throw SingularSystem("vertex " + std::to_string(cx.externalId(v)) +
                             " is disconnected from all Dirichlet vertices");
  }

  Potential pot;
  pot.g.assign(n, 0.0);
  for (int v = 0; v < n; ++v)
    if (bs.role[v] == Role::DirichletK) pot.g[v] = bs.k;

  const int m = static_cast<int>(freeVerts.size());
  if (m > 0) {
    Eigen::SparseMatrix<double> A(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < m; ++i) {
      int v = freeVerts[i];
      double diag = 0;
      for (auto [e, w] : cx.incidentEdges(v)) {
        double c = cx.edge(e).c;
        diag += c;
        if (freeIdx[w] >= 0)
          trips.emplace_back(i, freeIdx[w], -c);
        else
          rhs[i] += c * pot.g[w];
      }
      trips.emplace_back(i, i, diag);
    }
    A.setFromTriplets(trips.begin(), trips.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    Eigen::VectorXd x;
    bool ok = ldlt.info() == Eigen::Success;
    if (ok) x = ldlt.solve(rhs);

    auto residual = [&](const Eigen::VectorXd& sol) {
      for (int i = 0; i < m; ++i) pot.g[freeVerts[i]] = sol[i];
      double r = 0;
      for (int v : freeVerts) r = std::max(r, std::abs(laplacianAt(cx, pot.g, v)));
      return r;
    };
    double scale = std::max(1.0, bs.k);
    if (ok) pot.residualNorm = residual(x);
    if (!ok || pot.residualNorm > tolRel * scale) {
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
          cg(A);
      cg.setTolerance(tolRel * 1e-2);
      cg.setMaxIterations(20000);
      Eigen::VectorXd x2;
      if (ok)
        x2 = cg.solveWithGuess(rhs, x);
      else
        x2 = cg.solve(rhs);
      double r2 = residual(x2);
      if (!ok || r2 < pot.residualNorm) pot.residualNorm = r2;
      else residual(x);  // keep the better iterate
      if (pot.residualNorm > tolRel * scale * 10)
        throw SolverDivergence("residual " + std::to_string(pot.residualNorm) +
                               " exceeds tolerance");
    }
  }
  return pot;
}

std::vector<double> normalDerivative(const CellComplex& cx,
                                     const std::vector<double>& g,
                                     const std::vector<int>& arc) {
  std::vector<double> out;
  out.reserve(arc.size());
  for (int v : arc) {
    if (!cx.isBoundary(v) && cx.numCells() > 0)
      throw NotBoundary("flux requested at non-boundary vertex " +
                        std::to_string(cx.externalId(v)));
    out.push_back(laplacianAt(cx, g, v));
  }
  return out;
}

double dirichletEnergy(const CellComplex& cx, const std::vector<double>& u) {
  double acc = 0;
  for (int e = 0; e < cx.numEdges(); ++e) {
    const Edge& ed = cx.edge(e);
    double d = u[ed.u] - u[ed.v];
    acc += ed.c * d * d;
  }
  return acc;
}

double greenIdentityResidual(const CellComplex& cx, const std::vector<int>& F,
                             const std::vector<double>& u,
                             const std::vector<double>& v) {
  std::vector<char> inF(cx.numVertices(), 0);
  for (int x : F) inF[x] = 1;

  double lhs = 0;
  for (int e = 0; e < cx.numEdges(); ++e) {
    const Edge& ed = cx.edge(e);
    if (!inF[ed.u] && !inF[ed.v]) continue;
    lhs += ed.c * (u[ed.u] - u[ed.v]) * (v[ed.u] - v[ed.v]);
  }

  double rhs = 0;
  std::vector<char> seen(cx.numVertices(), 0);
  for (int x : F) {
    rhs += laplacianAt(cx, u, x) * v[x];
    seen[x] = 1;
  }
  for (int x : F)
    for (auto [e, w] : cx.incidentEdges(x)) {
      if (inF[w] || seen[w]) continue;
      seen[w] = 1;  // w in dF
      double flux = 0;
      for (auto [e2, y] : cx.incidentEdges(w))
        if (inF[y]) flux += cx.edge(e2).c * (u[w] - u[y]);
      rhs += flux * v[w];
    }
  return std::abs(lhs - rhs);
}

FluxReport checkConsistency(const CellComplex& cx, const BoundarySpec& bs,
                            const Potential& pot) {
  FluxReport rep;
  for (int v = 0; v < cx.numVertices(); ++v) {
    if (!cx.isBoundary(v)) continue;
    double f = laplacianAt(cx, pot.g, v);
    rep.perVertex[cx.externalId(v)] = f;
    rep.total += f;
  }
  auto arcTotal = [&](const std::vector<int>& arc) {
    double t = 0;
    for (int v : arc) t += laplacianAt(cx, pot.g, v);
    return t;
  };
  for (const auto& a : bs.alphaArcs) rep.alphaTotals.push_back(arcTotal(a));
  for (const auto& b : bs.betaArcs) rep.betaTotals.push_back(arcTotal(b));
  for (const auto& run : bs.constantRuns)
    if (run.role == Role::Dirichlet0) rep.groundTotals.push_back(arcTotal(run.verts));
  return rep;
}

void checkMaxPrinciple(const CellComplex& cx, const BoundarySpec& bs,
                       const std::vector<double>& g, double slack) {
  double lo = 0, hi = bs.k;
  for (int v = 0; v < cx.numVertices(); ++v) {
    if (g[v] < lo - slack * std::max(1.0, bs.k) ||
        g[v] > hi + slack * std::max(1.0, bs.k))
      throw ConsistencyViolation("value at vertex " +
                                 std::to_string(cx.externalId(v)) +
                                 " escapes [0,k]");
    if (bs.role[v] != Role::Interior) continue;
    bool allBelow = true, allAbove = true;
    for (auto [e, w] : cx.incidentEdges(v)) {
      if (g[w] >= g[v]) allBelow = false;
      if (g[w] <= g[v]) allAbove = false;
    }
    if (allBelow || allAbove)
      throw ConsistencyViolation("interior vertex " +
                                 std::to_string(cx.externalId(v)) +
                                 " is a strict local extremum");
  }
}

}  // namespace harmtile
