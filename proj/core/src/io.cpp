#include "tilenet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tilenet {

namespace {

void append(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  int n = std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  if (n > 0) out.append(buf, static_cast<std::size_t>(n));
}

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_vector(std::string& out, const char* key,
                   const std::vector<double>& v) {
  out += key;
  for (double x : v) {
    out += ' ';
    out += g12(x);
  }
  out += '\n';
}

constexpr const char* kPalette[] = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

const char* fill_for(int tileId) {
  int idx = (tileId - 1) % 10;
  if (idx < 0) idx += 10;
  return kPalette[idx];
}

// World-to-document transform: uniform scale to opts.targetWidth, y-axis
// flipped, a 3% margin around the content box.
struct SvgFrame {
  double minx = 0, miny = 0, maxy = 0, s = 1, width = 0, height = 0;

  static SvgFrame fit(double x0, double y0, double x1, double y1,
                      double targetWidth) {
    SvgFrame f;
    double w = std::max(x1 - x0, 1e-9);
    double h = std::max(y1 - y0, 1e-9);
    double pad = 0.03 * std::max(w, h);
    f.minx = x0 - pad;
    f.miny = y0 - pad;
    f.maxy = y1 + pad;
    f.s = targetWidth / (w + 2 * pad);
    f.width = targetWidth;
    f.height = (h + 2 * pad) * f.s;
    return f;
  }

  double px(double x) const { return (x - minx) * s; }
  double py(double y) const { return (maxy - y) * s; }
};

void svg_open(std::string& out, const SvgFrame& f) {
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  append(out,
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.6f\" "
         "height=\"%.6f\" viewBox=\"0 0 %.6f %.6f\">\n",
         f.width, f.height, f.width, f.height);
}

void svg_window_rect(std::string& out, const SvgFrame& f, const Window& w) {
  append(out,
         "<rect x=\"%.6f\" y=\"%.6f\" width=\"%.6f\" height=\"%.6f\" "
         "fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n",
         f.px(w.corner.x), f.py(w.corner.y + w.edge), w.edge * f.s,
         w.edge * f.s);
}

struct CsvCursor {
  const std::string& text;
  std::size_t pos = 0;
  int lineNo = 0;

  bool next(std::string& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    line.assign(text, pos, end - pos);
    pos = end + 1;
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
};

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = s.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
}

double parse_double(const std::string& tok, int lineNo) {
  char* endp = nullptr;
  double v = std::strtod(tok.c_str(), &endp);
  if (endp != tok.c_str() + tok.size() || tok.empty())
    fail(ErrorCode::SyntaxError, "net csv line " + std::to_string(lineNo) +
                                     ": bad number '" + tok + "'");
  return v;
}

std::int64_t parse_int(const std::string& tok, int lineNo) {
  char* endp = nullptr;
  long long v = std::strtoll(tok.c_str(), &endp, 10);
  if (endp != tok.c_str() + tok.size() || tok.empty())
    fail(ErrorCode::SyntaxError, "net csv line " + std::to_string(lineNo) +
                                     ": bad integer '" + tok + "'");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Structured text

std::string matrix_text(const SubstMatrix& a) {
  std::string out;
  append(out, "matrix %d\n", a.size());
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j)
      append(out, j ? " %lld" : "  %lld", static_cast<long long>(a(i, j)));
    out += '\n';
  }
  return out;
}

std::string spectral_text(const SubstMatrix& a, const SpectralReport& r,
                          double xi) {
  std::string out = "spectral-report\n";
  out += matrix_text(a);
  append(out, "primitive %s\n", r.primitive ? "true" : "false");
  append(out, "witness %d\n", r.witness);
  out += "xi " + g12(xi) + "\n";
  out += "lambda1 " + g12(r.lambda1) + "\n";
  out += "lambda2-abs " + g12(r.lambda2Abs) + "\n";
  append(out, "pisot %s\n", r.pisot ? "true" : "false");
  append_vector(out, "v1", r.v1);
  append_vector(out, "v1-unit", r.v1Unit);
  append_vector(out, "w1", r.w1);
  append_vector(out, "areas", r.areas);
  out += "a1 " + g12(r.a1) + "\n";
  out += "a2 " + g12(r.a2) + "\n";
  out += "alpha " + g12(r.alpha) + "\n";
  out += "epsilon " + g12(r.epsilon) + "\n";
  out += "delta " + g12(r.delta) + "\n";
  return out;
}

std::string validation_text(const ValidationReport& r) {
  std::string out = "validation-report\n";
  append(out, "ok %s\n", r.ok ? "true" : "false");
  for (const auto& t : r.perTile) {
    append(out, "tile %d area-residual-abs %s area-residual-rel %s overlaps %d\n",
           t.tileId, g12(t.areaResidualAbs).c_str(),
           g12(t.areaResidualRel).c_str(), t.overlapFindings);
  }
  return out;
}

std::string xi_consistency_text(const XiConsistency& x) {
  std::string out = "xi-consistency\n";
  out += "eigenvalue-residual " + g12(x.eigenvalueResidual) + "\n";
  out += "area-vector-residual " + g12(x.areaVectorResidual) + "\n";
  return out;
}

std::string decay_text(const DecayProbe& p) {
  std::string out = "decay-probe\n";
  append(out, "degenerate %s\n", p.degenerate ? "true" : "false");
  out += "vector-slope " + g12(p.vectorSlope) + "\n";
  out += "share-slope " + g12(p.shareSlope) + "\n";
  for (std::size_t i = 0; i < p.levels.size(); ++i) {
    append(out, "level %d vector-residual %s share-residual %s\n", p.levels[i],
           g12(p.vectorResidual[i]).c_str(), g12(p.shareResidual[i]).c_str());
  }
  return out;
}

std::string bk_text(const BkReport& r) {
  std::string out = "bk-report\n";
  out += "alpha " + g12(r.alpha) + "\n";
  append(out, "safe-window %s %s %s\n", g12(r.safe.corner.x).c_str(),
         g12(r.safe.corner.y).c_str(), g12(r.safe.edge).c_str());
  append(out, "empty-square-warnings %lld\n",
         static_cast<long long>(r.emptySquareWarnings));
  out += "omega-fit " + g12(r.omegaFit) + "\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const EAlphaStat& e = r.levels[i];
    append(out,
           "j %d edge %d positions %lld sampled %lld empty %lld max-e %s "
           "worst %d %d %lld product %s\n",
           e.j, e.edge, static_cast<long long>(e.positions),
           static_cast<long long>(e.sampled),
           static_cast<long long>(e.emptySquares), g12(e.maxE).c_str(),
           e.worst.x0, e.worst.y0, static_cast<long long>(e.worst.count),
           g12(r.productPartials[i]).c_str());
  }
  return out;
}

std::string laczkovich_text(const LaczkovichReport& r) {
  std::string out = "laczkovich-report\n";
  out += "alpha " + g12(r.alpha) + "\n";
  out += "scale " + g12(r.scale) + "\n";
  append(out, "windows %zu\n", r.samples.size());
  out += "max-ratio " + g12(r.maxRatio) + "\n";
  out += "loglog-slope " + g12(r.loglogSlope) + "\n";
  for (const auto& s : r.samples) {
    append(out, "window %d cells %lld boundary %s ratio %s\n", s.windowId,
           static_cast<long long>(s.cells), g12(s.boundary).c_str(),
           g12(s.ratio).c_str());
  }
  return out;
}

std::string layers_text(const LayerDecomposition& d) {
  std::string out = "layer-decomposition\n";
  append(out, "bottom-level %d\n", d.bottomLevel);
  append(out, "top-level %d\n", d.topLevel);
  out += "window-measure " + g12(d.windowMeasure) + "\n";
  append(out, "window-points %lld\n", static_cast<long long>(d.windowPoints));
  out += "boundary-measure " + g12(d.boundaryMeasure) + "\n";
  append(out, "boundary-points %lld\n",
         static_cast<long long>(d.boundaryPoints));
  out += "partition-residual " + g12(d.partitionResidual) + "\n";
  for (const auto& l : d.layers) {
    append(out, "layer %d tiles %lld measure %s points %lld discrepancy %s\n",
           l.level, static_cast<long long>(l.tileCount), g12(l.measure).c_str(),
           static_cast<long long>(l.points), g12(l.discrepancy).c_str());
  }
  return out;
}

std::string profile_text(const ProfileReport& r) {
  std::string out = "displacement-profile\n";
  out += "beta " + g12(r.beta) + "\n";
  out += "growth-exponent " + g12(r.growthExponent) + "\n";
  for (const auto& e : r.entries) {
    append(out,
           "level %d edge %s net-points %lld lattice-points %lld bottleneck %s"
           " phases",
           e.level, g12(e.windowEdge).c_str(),
           static_cast<long long>(e.netPoints),
           static_cast<long long>(e.latticePoints), g12(e.bottleneck).c_str());
    for (double v : e.perPhase) out += " " + g12(v);
    out += '\n';
  }
  return out;
}

std::string match_text(const MatchResult& m) {
  std::string out = "match-result\n";
  append(out, "pairs %zu\n", m.pairs.size());
  out += "bottleneck " + g12(m.bottleneck) + "\n";
  out += "cap-used " + g12(m.capUsed) + "\n";
  append(out, "unmatched-a %lld\n", static_cast<long long>(m.unmatchedA));
  append(out, "unmatched-b %lld\n", static_cast<long long>(m.unmatchedB));
  return out;
}

std::string cube_union_text(const CubeUnion& u) {
  std::string out;
  for (const auto& [x, y] : u.cells()) append(out, "%d %d\n", x, y);
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string patch_to_csv(const Patch& patch) {
  std::string out;
  append(out, "# patch rule %s root-type %d root-level %d tiles %zu\n",
         patch.rule ? patch.rule->name().c_str() : "none", patch.rootType,
         patch.rootLevel, patch.tiles.size());
  out += "tileId,level,address,rotationIndex,reflect,tx,ty\n";
  for (const auto& t : patch.tiles) {
    append(out, "%d,%d,%s,%d,%d,%s,%s\n", static_cast<int>(t.tileId),
           static_cast<int>(t.level), patch.address_string(t).c_str(),
           static_cast<int>(t.rot), t.reflect ? 1 : 0, g17(t.tx).c_str(),
           g17(t.ty).c_str());
  }
  return out;
}

std::string net_to_csv(const NetWindow& net) {
  std::string out;
  append(out, "# net source %s\n",
         net.source.empty() ? "unknown" : net.source.c_str());
  append(out, "# rule %s root-type %d root-level %d\n",
         net.rule ? net.rule->name().c_str() : "none", net.rootType,
         net.rootLevel);
  append(out, "# window %s %s %s\n", g17(net.window.corner.x).c_str(),
         g17(net.window.corner.y).c_str(), g17(net.window.edge).c_str());
  append(out, "# scale %s\n", g17(net.scale).c_str());
  append(out, "# delone %s %s %s\n", g17(net.r).c_str(), g17(net.R).c_str(),
         g17(net.rSampleSpacing).c_str());
  out += "x,y,tileId,address\n";
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    append(out, "%s,%s,%d,%llu\n", g17(net.points[i].x).c_str(),
           g17(net.points[i].y).c_str(), static_cast<int>(net.tileIds[i]),
           static_cast<unsigned long long>(net.addresses[i]));
  }
  return out;
}

NetWindow net_from_csv(const std::string& text) {
  NetWindow net;
  std::string ruleName = "none";
  CsvCursor cur{text};
  std::string line;
  bool sawColumns = false;
  while (cur.next(line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "net") {
        std::string sub;
        ss >> sub >> net.source;
      } else if (key == "rule") {
        ss >> ruleName;
        std::string k1, k2;
        ss >> k1 >> net.rootType >> k2 >> net.rootLevel;
      } else if (key == "window") {
        ss >> net.window.corner.x >> net.window.corner.y >> net.window.edge;
      } else if (key == "scale") {
        ss >> net.scale;
      } else if (key == "delone") {
        ss >> net.r >> net.R >> net.rSampleSpacing;
      }
      continue;
    }
    if (!sawColumns) {
      if (line != "x,y,tileId,address")
        fail(ErrorCode::SyntaxError,
             "net csv line " + std::to_string(cur.lineNo) +
                 ": expected column header 'x,y,tileId,address', got '" + line +
                 "'");
      sawColumns = true;
      continue;
    }
    std::vector<std::string> f = split_char(line, ',');
    if (f.size() != 4)
      fail(ErrorCode::SyntaxError, "net csv line " + std::to_string(cur.lineNo) +
                                       ": expected 4 fields, got " +
                                       std::to_string(f.size()));
    net.points.push_back(
        {parse_double(f[0], cur.lineNo), parse_double(f[1], cur.lineNo)});
    net.tileIds.push_back(static_cast<std::int32_t>(parse_int(f[2], cur.lineNo)));
    char* endp = nullptr;
    net.addresses.push_back(std::strtoull(f[3].c_str(), &endp, 10));
    if (endp != f[3].c_str() + f[3].size())
      fail(ErrorCode::SyntaxError, "net csv line " + std::to_string(cur.lineNo) +
                                       ": bad address '" + f[3] + "'");
  }
  if (!sawColumns)
    fail(ErrorCode::SyntaxError, "net csv: missing column header row");
  if (ruleName == "penrose" || ruleName == "chair")
    net.rule = builtin_rule(ruleName);
  net.finalize();
  return net;
}

std::string match_to_csv(const std::vector<Vec2>& a,
                         const std::vector<Vec2>& b, const MatchResult& m) {
  std::string out;
  append(out, "# match pairs %zu bottleneck %s\n", m.pairs.size(),
         g17(m.bottleneck).c_str());
  out += "yx,yy,lx,ly,displacement\n";
  for (const auto& [ia, ib] : m.pairs) {
    const Vec2& p = a[static_cast<std::size_t>(ia)];
    const Vec2& q = b[static_cast<std::size_t>(ib)];
    append(out, "%s,%s,%s,%s,%s\n", g17(p.x).c_str(), g17(p.y).c_str(),
           g17(q.x).c_str(), g17(q.y).c_str(),
           g17(std::hypot(p.x - q.x, p.y - q.y)).c_str());
  }
  return out;
}

std::string bk_to_csv(const BkReport& r) {
  std::string out;
  append(out, "# bk alpha %s omega-fit %s\n", g17(r.alpha).c_str(),
         g17(r.omegaFit).c_str());
  out += "j,edge,positions,sampled,empty,maxE,worstX,worstY,worstCount,product\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const EAlphaStat& e = r.levels[i];
    append(out, "%d,%d,%lld,%lld,%lld,%s,%d,%d,%lld,%s\n", e.j, e.edge,
           static_cast<long long>(e.positions),
           static_cast<long long>(e.sampled),
           static_cast<long long>(e.emptySquares), g17(e.maxE).c_str(),
           e.worst.x0, e.worst.y0, static_cast<long long>(e.worst.count),
           g17(r.productPartials[i]).c_str());
  }
  return out;
}

std::string laczkovich_to_csv(const LaczkovichReport& r) {
  std::string out;
  append(out, "# laczkovich alpha %s scale %s max-ratio %s loglog-slope %s\n",
         g17(r.alpha).c_str(), g17(r.scale).c_str(), g17(r.maxRatio).c_str(),
         g17(r.loglogSlope).c_str());
  out += "windowId,cells,boundary,ratio\n";
  for (const auto& s : r.samples) {
    append(out, "%d,%lld,%s,%s\n", s.windowId,
           static_cast<long long>(s.cells), g17(s.boundary).c_str(),
           g17(s.ratio).c_str());
  }
  return out;
}

std::string layers_to_csv(const LayerDecomposition& d) {
  std::string out;
  append(out,
         "# layers bottom %d top %d window-measure %s window-points %lld "
         "boundary-measure %s boundary-points %lld\n",
         d.bottomLevel, d.topLevel, g17(d.windowMeasure).c_str(),
         static_cast<long long>(d.windowPoints),
         g17(d.boundaryMeasure).c_str(),
         static_cast<long long>(d.boundaryPoints));
  out += "level,tiles,measure,points,discrepancy\n";
  for (const auto& l : d.layers) {
    append(out, "%d,%lld,%s,%lld,%s\n", l.level,
           static_cast<long long>(l.tileCount), g17(l.measure).c_str(),
           static_cast<long long>(l.points), g17(l.discrepancy).c_str());
  }
  return out;
}

std::string profile_to_csv(const ProfileReport& r) {
  std::string out;
  append(out, "# profile beta %s growth-exponent %s\n", g17(r.beta).c_str(),
         g17(r.growthExponent).c_str());
  out += "level,windowEdge,netPoints,latticePoints,bottleneck\n";
  for (const auto& e : r.entries) {
    append(out, "%d,%s,%lld,%lld,%s\n", e.level, g17(e.windowEdge).c_str(),
           static_cast<long long>(e.netPoints),
           static_cast<long long>(e.latticePoints), g17(e.bottleneck).c_str());
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG

std::string render_svg(const Patch& patch, const SvgOptions& opts) {
  if (patch.tiles.empty()) fail(ErrorCode::EmptyPatch, "nothing to render");
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  std::vector<std::vector<Vec2>> polys;
  polys.reserve(patch.tiles.size());
  for (const auto& t : patch.tiles) {
    polys.push_back(patch.polygon_of(t));
    for (const Vec2& v : polys.back()) {
      x0 = std::min(x0, v.x);
      y0 = std::min(y0, v.y);
      x1 = std::max(x1, v.x);
      y1 = std::max(y1, v.y);
    }
  }
  SvgFrame f = SvgFrame::fit(x0, y0, x1, y1, opts.targetWidth);
  std::string out;
  svg_open(out, f);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    out += "<polygon points=\"";
    for (std::size_t k = 0; k < polys[i].size(); ++k) {
      append(out, k ? " %.6f,%.6f" : "%.6f,%.6f", f.px(polys[i][k].x),
             f.py(polys[i][k].y));
    }
    append(out, "\" fill=\"%s\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n",
           fill_for(patch.tiles[i].tileId));
  }
  out += "</svg>\n";
  return out;
}

std::string render_svg(const NetWindow& net, const SvgOptions& opts) {
  if (net.points.empty()) fail(ErrorCode::EmptyPatch, "nothing to render");
  double x0 = net.window.corner.x, y0 = net.window.corner.y;
  double x1 = x0 + net.window.edge, y1 = y0 + net.window.edge;
  for (const Vec2& p : net.points) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  SvgFrame f = SvgFrame::fit(x0, y0, x1, y1, opts.targetWidth);
  std::string out;
  svg_open(out, f);
  if (opts.drawWindow && net.window.edge > 0) svg_window_rect(out, f, net.window);
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    append(out, "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"%s\"/>\n",
           f.px(net.points[i].x), f.py(net.points[i].y), opts.pointRadius,
           fill_for(net.tileIds.empty() ? 1 : net.tileIds[i]));
  }
  out += "</svg>\n";
  return out;
}

std::string render_svg(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                       const MatchResult& m, const SvgOptions& opts) {
  if (a.empty() && b.empty()) fail(ErrorCode::EmptyPatch, "nothing to render");
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto* side : {&a, &b}) {
    for (const Vec2& p : *side) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
  }
  SvgFrame f = SvgFrame::fit(x0, y0, x1, y1, opts.targetWidth);
  std::string out;
  svg_open(out, f);
  for (const auto& [ia, ib] : m.pairs) {
    const Vec2& p = a[static_cast<std::size_t>(ia)];
    const Vec2& q = b[static_cast<std::size_t>(ib)];
    append(out,
           "<line x1=\"%.6f\" y1=\"%.6f\" x2=\"%.6f\" y2=\"%.6f\" "
           "stroke=\"#e15759\" stroke-width=\"1\"/>\n",
           f.px(p.x), f.py(p.y), f.px(q.x), f.py(q.y));
  }
  for (const Vec2& p : a)
    append(out, "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"%s\"/>\n",
           f.px(p.x), f.py(p.y), opts.pointRadius, kPalette[0]);
  for (const Vec2& p : b)
    append(out,
           "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"none\" "
           "stroke=\"%s\" stroke-width=\"1\"/>\n",
           f.px(p.x), f.py(p.y), opts.pointRadius, kPalette[1]);
  out += "</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Files

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace tilenet
