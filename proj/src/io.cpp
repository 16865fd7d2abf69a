#include "harmtile/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace harmtile {

using nlohmann::json;

const char* kVersion = "0.1.0";

double numberField(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      size_t ppos = 0, qpos = 0;
      double p = std::stod(s.substr(0, slash), &ppos);
      double q = std::stod(s.substr(slash + 1), &qpos);
      if (ppos != slash || qpos != s.size() - slash - 1)
        throw ParseError("bad rational '" + s + "' in " + what);
      if (q == 0) throw ParseError("zero denominator in " + what);
      return p / q;
    } catch (const std::invalid_argument&) {
      throw ParseError("bad number '" + s + "' in " + what);
    } catch (const std::out_of_range&) {
      throw ParseError("number out of range '" + s + "' in " + what);
    }
  }
  throw ParseError(what + " must be a number or \"p/q\" string");
}

namespace {
const json& need(const json& doc, const char* key, const std::string& ctx) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError("missing \"" + std::string(key) + "\" in " + ctx);
  return *it;
}

std::vector<std::vector<VId>> idListList(const json& arr, const std::string& ctx) {
  if (!arr.is_array()) throw ParseError(ctx + " must be an array");
  std::vector<std::vector<VId>> out;
  for (const auto& sub : arr) {
    if (!sub.is_array()) throw ParseError(ctx + " entries must be arrays of vertex ids");
    std::vector<VId> ids;
    for (const auto& id : sub) {
      if (!id.is_number_integer()) throw ParseError(ctx + " ids must be integers");
      ids.push_back(id.get<VId>());
    }
    out.push_back(std::move(ids));
  }
  return out;
}
}  // namespace

RawComplex parseComplex(const json& doc) {
  if (!doc.is_object()) throw ParseError("document root must be an object");
  RawComplex raw;
  for (const auto& v : need(doc, "vertices", "document")) {
    RawVertex rv;
    const auto& idv = need(v, "id", "vertex");
    if (!idv.is_number_integer()) throw ParseError("vertex id must be an integer");
    rv.id = idv.get<VId>();
    rv.x = numberField(need(v, "x", "vertex"), "vertex x");
    rv.y = numberField(need(v, "y", "vertex"), "vertex y");
    raw.vertices.push_back(rv);
  }
  for (const auto& e : need(doc, "edges", "document")) {
    RawEdge re;
    const auto &uv = need(e, "u", "edge"), &vv = need(e, "v", "edge");
    if (!uv.is_number_integer() || !vv.is_number_integer())
      throw ParseError("edge endpoints must be integer ids");
    re.u = uv.get<VId>();
    re.v = vv.get<VId>();
    re.c = numberField(need(e, "c", "edge"), "conductance");
    raw.edges.push_back(re);
  }
  raw.cells = idListList(need(doc, "cells", "document"), "cells");
  const json& b = need(doc, "boundary", "document");
  raw.k = numberField(need(b, "k", "boundary"), "k");
  if (b.contains("loops")) raw.boundaryLoops = idListList(b["loops"], "boundary.loops");
  raw.alphaArcs = idListList(need(b, "alphaArcs", "boundary"), "alphaArcs");
  if (b.contains("betaArcs")) raw.betaArcs = idListList(b["betaArcs"], "betaArcs");
  return raw;
}

RawComplex parseComplexText(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("invalid JSON");
  return parseComplex(doc);
}

RawComplex loadComplexFile(const std::string& path) {
  return parseComplexText(readTextFile(path));
}

json emitComplex(const RawComplex& raw) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : raw.vertices)
    doc["vertices"].push_back({{"id", v.id}, {"x", v.x}, {"y", v.y}});
  doc["edges"] = json::array();
  for (const auto& e : raw.edges)
    doc["edges"].push_back({{"u", e.u}, {"v", e.v}, {"c", e.c}});
  doc["cells"] = raw.cells;
  json b;
  b["k"] = raw.k;
  if (!raw.boundaryLoops.empty()) b["loops"] = raw.boundaryLoops;
  b["alphaArcs"] = raw.alphaArcs;
  b["betaArcs"] = raw.betaArcs;
  doc["boundary"] = std::move(b);
  return doc;
}

std::string readTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

}  // namespace harmtile
