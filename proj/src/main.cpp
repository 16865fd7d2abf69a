#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harmtile/bvp.hpp"
#include "harmtile/complex.hpp"
#include "harmtile/decomp.hpp"
#include "harmtile/errors.hpp"
#include "harmtile/fixtures.hpp"
#include "harmtile/io.hpp"
#include "harmtile/morse.hpp"
#include "harmtile/svg.hpp"
#include "harmtile/tiler.hpp"

using nlohmann::json;
using namespace harmtile;

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  std::string out = ".";
  bool tiePerturb = false;
  double tolRel = 1e-9;
  int raster = 1000;
  double scale = 120;
};

int logLevel() {  // 0 quiet, 1 info, 2 debug
  const char* v = std::getenv("HARMTILE_LOG");
  if (!v) return 1;
  std::string s = v;
  if (s == "debug") return 2;
  if (s == "quiet" || s == "0") return 0;
  return 1;
}

void logStep(const std::string& msg) {
  if (logLevel() >= 2) std::cerr << "[harmtile] " << msg << "\n";
}

[[noreturn]] void usage() {
  std::cerr <<
      "usage: harmtile <solve|index|decompose|tile|verify|gen>\n"
      "                --input FILE [--out DIR] [--tie-perturb]\n"
      "                [--tol-rel 1e-9] [--raster 1000] [--scale 120]\n"
      "\n"
      "  solve      solve the boundary problem; writes solve.json\n"
      "  index      vertex indices and the boundary identity; index.json\n"
      "  decompose  cut at singular levels and classify; decompose.json\n"
      "  tile       full tiling; net.json + per-component SVG + surface SVG\n"
      "  verify     run the whole pipeline and report every check\n"
      "  gen        --input is a fixture name (FIX-QUAD, FIX-ANN,\n"
      "             FIX-ANN-INNER, FIX-ANN-BOTH, FIX-CYL, FIX-PANTS1,\n"
      "             FIX-PANTS2, random:<seed>:<quad|annulus|pants>);\n"
      "             writes the input document to stdout or --out\n"
      "\n"
      "  HARMTILE_LOG=quiet|info|debug\n"
      "  exit codes: 0 ok, 2 validation, 3 solver, 4 index, 5 tiling\n";
  std::exit(2);
}

RunConfig parseArgs(int argc, char** argv) {
  if (argc < 2) usage();
  RunConfig cfg;
  cfg.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    std::string a = argv[i];
    auto value = [&]() -> std::string {
      if (++i >= argc) usage();
      return argv[i];
    };
    if (a == "--input")
      cfg.input = value();
    else if (a == "--out")
      cfg.out = value();
    else if (a == "--tie-perturb")
      cfg.tiePerturb = true;
    else if (a == "--tol-rel")
      cfg.tolRel = std::stod(value());
    else if (a == "--raster")
      cfg.raster = std::stoi(value());
    else if (a == "--scale")
      cfg.scale = std::stod(value());
    else
      usage();
  }
  if (cfg.input.empty()) usage();
  if (cfg.tolRel <= 0) throw ValidationError("--tol-rel must be positive");
  if (cfg.raster < 64) throw ValidationError("--raster must be >= 64");
  return cfg;
}

json configEcho(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"input", cfg.input},
          {"out", cfg.out},         {"tiePerturb", cfg.tiePerturb},
          {"tolRel", cfg.tolRel},   {"raster", cfg.raster},
          {"scale", cfg.scale}};
}

void writeReport(const RunConfig& cfg, const std::string& name, json doc) {
  doc["version"] = kVersion;
  doc["config"] = configEcho(cfg);
  std::filesystem::create_directories(cfg.out);
  std::string path = cfg.out + "/" + name;
  writeTextFile(path, doc.dump(2) + "\n");
  if (logLevel() >= 1) std::cout << "wrote " << path << "\n";
}

struct Session {
  RawComplex raw;
  CellComplex cx;
  BoundarySpec bs;
  Potential pot;
};

Session load(const RunConfig& cfg) {
  logStep("loading " + cfg.input);
  RawComplex raw = cfg.input.rfind("FIX-", 0) == 0 ||
                           cfg.input.rfind("random:", 0) == 0
                       ? genFixture(cfg.input)
                       : loadComplexFile(cfg.input);
  CellComplex cx = CellComplex::build(raw);
  BoundarySpec bs = deriveBoundarySpec(cx, raw);
  logStep("solving " + std::to_string(cx.numVertices()) + " vertices");
  Potential pot = solveDNBVP(cx, bs);
  return {std::move(raw), std::move(cx), std::move(bs), std::move(pot)};
}

json solveJson(const Session& s) {
  json g = json::object();
  for (int v = 0; v < s.cx.numVertices(); ++v)
    g[std::to_string(s.cx.externalId(v))] = s.pot.g[v];
  FluxReport rep = checkConsistency(s.cx, s.bs, s.pot);
  json flux = json::object();
  for (auto [id, f] : rep.perVertex) flux[std::to_string(id)] = f;
  return {{"g", std::move(g)},
          {"energy", dirichletEnergy(s.cx, s.pot.g)},
          {"residual", s.pot.residualNorm},
          {"boundaryFlux", std::move(flux)},
          {"alphaTotals", rep.alphaTotals},
          {"groundTotals", rep.groundTotals},
          {"betaTotals", rep.betaTotals},
          {"consistencyTotal", rep.total}};
}

json indexJson(const Session& s, bool tiePerturb) {
  IndexReport rep = indexFormulaCheck(s.cx, s.bs, s.pot.g, tiePerturb);
  json per = json::object();
  for (auto& [id, e] : rep.perVertex)
    per[std::to_string(id)] = {{"sgc", e.sgc}, {"index", e.index}};
  return {{"perVertex", std::move(per)},
          {"interiorSingular", rep.interiorSingular},
          {"boundarySingular", rep.boundarySingular},
          {"totalIndex", rep.totalIndex},
          {"arcEndpointCount", rep.arcEndpointCount},
          {"expected", rep.expected},
          {"perturbed", rep.perturbed}};
}

const char* kindName(CompKind k) {
  switch (k) {
    case CompKind::Quadrilateral: return "quadrilateral";
    case CompKind::SlicedQuadrilateral: return "sliced-quadrilateral";
    default: return "annulus";
  }
}

json decompJson(const Session& s, const Decomposition& dec,
                const std::vector<GluingEdge>& seams) {
  json comps = json::array();
  for (const Component& c : dec.components) {
    json identified = json::array();
    for (auto [rv, n] : c.identified) {
      int orig = dec.rc.verts()[rv].orig;
      identified.push_back(
          {{"vertex", orig >= 0 ? json(s.cx.externalId(orig)) : json()},
           {"visits", n}});
    }
    comps.push_back({{"kind", kindName(c.kind)},
                     {"band", c.band},
                     {"cells", c.cells.size()},
                     {"loops", c.loops.size()},
                     {"corners", c.corners},
                     {"identified", std::move(identified)}});
  }
  json seamArr = json::array();
  for (const GluingEdge& ge : seams)
    seamArr.push_back({{"level", ge.level},
                       {"below", ge.below},
                       {"above", ge.above},
                       {"lengthBelow", ge.lengthBelow},
                       {"lengthAbove", ge.lengthAbove},
                       {"pieces", ge.pieces},
                       {"closed", ge.closed}});
  return {{"cuts", dec.cuts},
          {"components", std::move(comps)},
          {"seams", std::move(seamArr)}};
}

const char* targetName(TargetKind t) {
  switch (t) {
    case TargetKind::Rectangle: return "rectangle";
    case TargetKind::SlicedRectangle: return "sliced-rectangle";
    default: return "cylinder";
  }
}

json netJson(const Decomposition& dec, const SurfaceNet& net,
             const DoublingReport& dbl) {
  json parts = json::array();
  for (const TiledComponent& tc : net.parts) {
    json tiles = json::array();
    for (const RectTile& t : tc.tiles)
      tiles.push_back({{"edge", dec.rc.segs()[t.seg].hostEdge},
                       {"x0", t.x0},
                       {"x1", t.x1},
                       {"y0", t.y0},
                       {"y1", t.y1},
                       {"embedded", t.embedded},
                       {"degenerate", t.degenerate}});
    json slices = json::array();
    for (const SliceImage& si : tc.slices) {
      json blocks = json::array();
      for (auto [a, b] : si.blocks) blocks.push_back({a, b});
      slices.push_back({{"value", dec.rc.gAt(si.rv)}, {"blocks", blocks}});
    }
    parts.push_back({{"component", tc.component},
                     {"target", targetName(tc.target)},
                     {"lo", tc.lo},
                     {"hi", tc.hi},
                     {"W", tc.W},
                     {"H", tc.H},
                     {"C", tc.C},
                     {"energy", tc.energy},
                     {"tiles", std::move(tiles)},
                     {"slices", std::move(slices)},
                     {"coverage",
                      {{"raster", tc.coverage.raster},
                       {"sampled", tc.coverage.sampled},
                       {"skipped", tc.coverage.skipped},
                       {"degenerateTiles", tc.coverage.degenerateTiles}}}});
  }
  json cones = json::array();
  for (const ConeEntry& ce : net.cones) {
    int orig = dec.rc.verts()[ce.rv].orig;
    cones.push_back(
        {{"vertex",
          orig >= 0 ? json(dec.rc.base().externalId(orig)) : json()},
         {"angle", ce.angle},
         {"multiplicity", ce.multiplicity},
         {"kind", ce.kind == ConeEntry::Kind::Corner
                      ? "corner"
                      : (ce.kind == ConeEntry::Kind::Slice ? "slice"
                                                           : "interior")},
         {"boundary", ce.boundary}});
  }
  json dcones = json::array();
  for (const DoubledCone& dc : dbl.cones) {
    int orig = dec.rc.verts()[dc.rv].orig;
    dcones.push_back(
        {{"vertex",
          orig >= 0 ? json(dec.rc.base().externalId(orig)) : json()},
         {"angle", dc.angle},
         {"copies", dc.copies}});
  }
  return {{"energy", net.energy},
          {"boundaryComponents", net.boundaryComponents},
          {"parts", std::move(parts)},
          {"cones", std::move(cones)},
          {"doubled",
           {{"genus", dbl.genus}, {"area", dbl.area}, {"cones", dcones}}}};
}

int run(const RunConfig& cfg) {
  if (cfg.command == "gen") {
    json doc = emitComplex(genFixture(cfg.input));
    if (cfg.out == ".") {
      std::cout << doc.dump(2) << "\n";
    } else {
      std::filesystem::create_directories(cfg.out);
      writeTextFile(cfg.out + "/" + cfg.input + ".json", doc.dump(2) + "\n");
      if (logLevel() >= 1)
        std::cout << "wrote " << cfg.out << "/" << cfg.input << ".json\n";
    }
    return 0;
  }

  Session s = load(cfg);
  if (cfg.command == "solve") {
    writeReport(cfg, "solve.json", solveJson(s));
    return 0;
  }
  if (cfg.command == "index") {
    writeReport(cfg, "index.json", indexJson(s, cfg.tiePerturb));
    return 0;
  }
  if (cfg.command == "decompose") {
    Decomposition dec = decompose(s.cx, s.bs, s.pot.g, cfg.tiePerturb);
    std::vector<GluingEdge> seams = verifyGluing(dec, cfg.tolRel);
    writeReport(cfg, "decompose.json", decompJson(s, dec, seams));
    return 0;
  }
  if (cfg.command == "tile" || cfg.command == "verify") {
    json report = {{"solve", solveJson(s)},
                   {"index", indexJson(s, cfg.tiePerturb)}};
    logStep("decomposing");
    Decomposition dec = decompose(s.cx, s.bs, s.pot.g, cfg.tiePerturb);
    std::vector<GluingEdge> seams = verifyGluing(dec, cfg.tolRel);
    report["decompose"] = decompJson(s, dec, seams);
    logStep("tiling " + std::to_string(dec.components.size()) +
            " components at raster " + std::to_string(cfg.raster));
    SurfaceNet net = assembleSurface(dec, cfg.raster);
    DoublingReport dbl = doublingReport(net);
    report["net"] = netJson(dec, net, dbl);

    double E = dirichletEnergy(s.cx, s.pot.g);
    checkMaxPrinciple(s.cx, s.bs, s.pot.g);
    json checks = {
        {"energyMatchesAreas", std::abs(net.energy - E) <= cfg.tolRel * E},
        {"doubledAreaIs2E", dbl.area == 2 * net.energy},
        {"genusIsMminus1", dbl.genus == net.boundaryComponents - 1},
        {"maxPrinciple", true},
        {"seams", seams.size()}};
    report["checks"] = std::move(checks);

    if (cfg.command == "verify") {
      writeReport(cfg, "verify.json", report);
      return 0;
    }
    writeReport(cfg, "net.json", report);
    std::filesystem::create_directories(cfg.out);
    for (const TiledComponent& tc : net.parts) {
      std::string path = cfg.out + "/component" +
                         std::to_string(tc.component) + ".svg";
      writeTextFile(path, renderComponentSvg(dec, tc, cfg.scale));
      if (logLevel() >= 1) std::cout << "wrote " << path << "\n";
    }
    std::string path = cfg.out + "/surface.svg";
    writeTextFile(path, renderSurfaceSvg(dec, net, cfg.scale));
    if (logLevel() >= 1) std::cout << "wrote " << path << "\n";
    return 0;
  }
  usage();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(parseArgs(argc, argv));
  } catch (const Error& e) {
    std::cerr << "harmtile: " << e.what() << "\n";
    return static_cast<int>(e.cls());
  } catch (const std::exception& e) {
    std::cerr << "harmtile: " << e.what() << "\n";
    return 1;
  }
}
