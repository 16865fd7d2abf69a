#include "harmtile/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace harmtile {

namespace {

const char* kPalette[] = {"#b3cde3", "#ccebc5", "#fbb4ae", "#decbe4",
                          "#fed9a6", "#ffffcc", "#e5d8bd", "#fddaec"};
constexpr int kPaletteN = 8;
constexpr double kMargin = 24;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v + 0.0);  // avoid "-0"
  return buf;
}

struct Frame {
  double ox, oy;     // screen offset of the target's top-left corner
  double scale;
  double span;       // drawable y height (H, or C on cylinders)
  double lo;         // value at the left edge
  double sx(double x) const { return ox + (x - lo) * scale; }
  double sy(double y) const { return oy + (span - y) * scale; }
};

void rect(std::ostream& os, const Frame& f, double x0, double x1, double y0,
          double y1, const std::string& fill, const char* extra = "") {
  os << "<rect x=\"" << num(f.sx(x0)) << "\" y=\"" << num(f.sy(y1))
     << "\" width=\"" << num((x1 - x0) * f.scale) << "\" height=\""
     << num((y1 - y0) * f.scale) << "\" fill=\"" << fill
     << "\" stroke=\"#333\" stroke-width=\"0.8\"" << extra << "/>\n";
}

void text(std::ostream& os, double x, double y, const std::string& s,
          const char* anchor = "middle", int size = 10) {
  os << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\""
     << size << "\" font-family=\"monospace\" text-anchor=\"" << anchor
     << "\">" << s << "</text>\n";
}

// one component into an open stream at the given frame origin
void drawComponent(std::ostream& os, const Decomposition& dec,
                   const TiledComponent& tc, const Frame& f) {
  bool wrap = tc.target == TargetKind::Cylinder;
  os << "<g>\n";
  // frame of the target
  os << "<rect x=\"" << num(f.sx(tc.lo)) << "\" y=\"" << num(f.sy(f.span))
     << "\" width=\"" << num(tc.W * f.scale) << "\" height=\""
     << num(f.span * f.scale)
     << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\"/>\n";

  std::vector<const RectTile*> order;
  for (const RectTile& t : tc.tiles) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const RectTile* a, const RectTile* b) {
    return std::tie(a->x0, a->y0, a->seg) < std::tie(b->x0, b->y0, b->seg);
  });

  for (const RectTile* t : order) {
    int edge = dec.rc.segs()[t->seg].hostEdge;
    if (t->degenerate) {
      // zero-area tile: a tick where the endpoint images meet
      os << "<line x1=\"" << num(f.sx(t->x0) - 3) << "\" y1=\""
         << num(f.sy(t->y0)) << "\" x2=\"" << num(f.sx(t->x0) + 3)
         << "\" y2=\"" << num(f.sy(t->y0))
         << "\" stroke=\"#a00\" stroke-width=\"1.2\"/>\n";
      continue;
    }
    std::string fill = kPalette[edge % kPaletteN];
    const char* extra = t->embedded ? "" : " stroke-dasharray=\"3,2\"";
    double top = t->y1, bot = t->y0;
    if (wrap && top > f.span + 1e-12) {  // split wrapped cylinder tiles
      rect(os, f, t->x0, t->x1, bot, f.span, fill, extra);
      rect(os, f, t->x0, t->x1, 0, top - f.span, fill, extra);
    } else {
      rect(os, f, t->x0, t->x1, bot, top, fill, extra);
    }
    if ((t->x1 - t->x0) * f.scale > 16 && (top - bot) * f.scale > 11)
      text(os, f.sx(0.5 * (t->x0 + t->x1)),
           f.sy(std::min(0.5 * (bot + top), f.span - 0.5 / f.scale)) + 3,
           "e" + std::to_string(edge));
  }

  // identified-point blocks along the quotient edge, dashed
  for (const SliceImage& si : tc.slices) {
    double x = dec.rc.gAt(si.rv);
    for (auto [y0, y1] : si.blocks)
      os << "<line x1=\"" << num(f.sx(x)) << "\" y1=\"" << num(f.sy(y0))
         << "\" x2=\"" << num(f.sx(x)) << "\" y2=\"" << num(f.sy(y1))
         << "\" stroke=\"#c00\" stroke-width=\"3\" "
            "stroke-dasharray=\"4,3\"/>\n";
  }
  os << "</g>\n";
}

std::string header(double w, double h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w)
     << "\" height=\"" << num(h) << "\" viewBox=\"0 0 " << num(w) << " "
     << num(h) << "\">\n<rect width=\"100%\" height=\"100%\" "
        "fill=\"#fff\"/>\n";
  return os.str();
}

double spanOf(const TiledComponent& tc) {
  return tc.target == TargetKind::Cylinder ? tc.C : tc.H;
}

}  // namespace

std::string renderComponentSvg(const Decomposition& dec,
                               const TiledComponent& tc, double scale) {
  double span = spanOf(tc);
  double w = tc.W * scale + 2 * kMargin, h = span * scale + 2 * kMargin + 14;
  std::ostringstream os;
  os << header(w, h);
  Frame f{kMargin, kMargin, scale, span, tc.lo};
  drawComponent(os, dec, tc, f);
  const char* kind = tc.target == TargetKind::Cylinder
                         ? "cylinder"
                         : (tc.target == TargetKind::SlicedRectangle
                                ? "sliced rectangle"
                                : "rectangle");
  text(os, kMargin, span * scale + 2 * kMargin + 8,
       "component " + std::to_string(tc.component) + ": " + kind + " W=" +
           num(tc.W) + (tc.target == TargetKind::Cylinder ? " C=" : " H=") +
           num(span),
       "start");
  os << "</svg>\n";
  return os.str();
}

std::string renderSurfaceSvg(const Decomposition& dec, const SurfaceNet& net,
                             double scale) {
  constexpr double kGap = 36;
  double maxSpan = 0, totalW = 0;
  for (const TiledComponent& tc : net.parts) {
    maxSpan = std::max(maxSpan, spanOf(tc));
    totalW += tc.W * scale + kGap;
  }
  int legendRows = static_cast<int>(net.seams.size() + net.cones.size());
  double w = totalW - kGap + 2 * kMargin;
  double h = maxSpan * scale + 2 * kMargin + 16.0 * (legendRows + 2);
  std::ostringstream os;
  os << header(w, h);

  double ox = kMargin;
  for (const TiledComponent& tc : net.parts) {
    Frame f{ox, kMargin + (maxSpan - spanOf(tc)) * scale, scale, spanOf(tc),
            tc.lo};
    drawComponent(os, dec, tc, f);
    text(os, ox, kMargin - 6, "c" + std::to_string(tc.component), "start");
    ox += tc.W * scale + kGap;
  }

  // legend: seams as dashed strokes, cones circled with their angles
  double ly = maxSpan * scale + 2 * kMargin + 8;
  for (size_t i = 0; i < net.seams.size(); ++i) {
    const GluingEdge& ge = net.seams[i];
    os << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(ly - 3)
       << "\" x2=\"" << num(kMargin + 22) << "\" y2=\"" << num(ly - 3)
       << "\" stroke=\"#00c\" stroke-width=\"2\" "
          "stroke-dasharray=\"5,3\"/>\n";
    text(os, kMargin + 28, ly,
         "seam " + std::to_string(i) + ": c" + std::to_string(ge.below) +
             " / c" + std::to_string(ge.above) + " at g=" + num(ge.level) +
             " len=" + num(ge.lengthBelow) + (ge.closed ? " (closed)" : ""),
         "start");
    ly += 16;
  }
  char angle[48];
  for (const ConeEntry& ce : net.cones) {
    os << "<circle cx=\"" << num(kMargin + 8) << "\" cy=\"" << num(ly - 4)
       << "\" r=\"7\" fill=\"none\" stroke=\"#c00\" stroke-width=\"1.5\"/>\n";
    std::snprintf(angle, sizeof angle, "%.4gpi", ce.angle / 3.14159265358979);
    int orig = dec.rc.verts()[ce.rv].orig;
    std::string at = orig >= 0
                         ? "v" + std::to_string(dec.rc.base().externalId(orig))
                         : "rv" + std::to_string(ce.rv);
    text(os, kMargin + 22, ly,
         "cone " + at + ": " + angle +
             (ce.multiplicity > 1
                  ? " x" + std::to_string(ce.multiplicity)
                  : std::string()) +
             (ce.boundary ? " (boundary)" : " (interior)"),
         "start");
    ly += 16;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace harmtile
