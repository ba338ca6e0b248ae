#include "tilenet/discrepancy.hpp"

#include <algorithm>
#include <cmath>

namespace tilenet {

namespace {
// Safety margin keeping windows one level-0 tile diameter away from the
// master-patch boundary, so finite-window counts match the infinite tiling.
double default_margin(const NetWindow& net) {
  if (net.rule) return net.rule->max_tile_diameter() * net.scale;
  return 4.0 * std::sqrt(net.window.edge * net.window.edge /
                         std::max<std::size_t>(1, net.points.size()));
}
}  // namespace

CellCounts::CellCounts(const NetWindow& net) {
  if (net.points.empty()) fail(ErrorCode::EmptyPatch, "net has no points");
  double minX = net.points[0].x, maxX = minX;
  double minY = net.points[0].y, maxY = minY;
  for (Vec2 p : net.points) {
    minX = std::min(minX, p.x);
    maxX = std::max(maxX, p.x);
    minY = std::min(minY, p.y);
    maxY = std::max(maxY, p.y);
  }
  x0_ = static_cast<int>(std::floor(minX));
  y0_ = static_cast<int>(std::floor(minY));
  w_ = static_cast<int>(std::floor(maxX)) - x0_ + 1;
  h_ = static_cast<int>(std::floor(maxY)) - y0_ + 1;
  prefix_.assign(static_cast<std::size_t>(w_ + 1) * (h_ + 1), 0);
  auto at = [&](int i, int j) -> std::int64_t& {
    return prefix_[static_cast<std::size_t>(i) * (h_ + 1) + j];
  };
  for (Vec2 p : net.points) {
    int ix = static_cast<int>(std::floor(p.x)) - x0_;
    int iy = static_cast<int>(std::floor(p.y)) - y0_;
    ++at(ix + 1, iy + 1);
  }
  for (int i = 1; i <= w_; ++i)
    for (int j = 1; j <= h_; ++j)
      at(i, j) += at(i - 1, j) + at(i, j - 1) - at(i - 1, j - 1);
}

std::int64_t CellCounts::count_rect(int x0, int y0, int x1, int y1) const {
  x0 = std::clamp(x0 - x0_, 0, w_);
  x1 = std::clamp(x1 - x0_, 0, w_);
  y0 = std::clamp(y0 - y0_, 0, h_);
  y1 = std::clamp(y1 - y0_, 0, h_);
  if (x0 >= x1 || y0 >= y1) return 0;
  auto at = [&](int i, int j) {
    return prefix_[static_cast<std::size_t>(i) * (h_ + 1) + j];
  };
  return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
}

std::int64_t CellCounts::total() const {
  return prefix_.empty() ? 0 : prefix_.back();
}

double e_alpha(const CellCounts& cells, int x0, int y0, int edge, double alpha,
               const Window* safe) {
  if (edge < 1) fail(ErrorCode::InvalidArgument, "square edge must be >= 1");
  if (!(alpha > 0)) fail(ErrorCode::InvalidArgument, "alpha must be positive");
  if (safe) {
    const double tol = 1e-9;
    if (x0 < safe->corner.x - tol || y0 < safe->corner.y - tol ||
        x0 + edge > safe->corner.x + safe->edge + tol ||
        y0 + edge > safe->corner.y + safe->edge + tol)
      fail(ErrorCode::OutsideSafeRegion,
           "square leaves the safe evaluation region");
  }
  std::int64_t count = cells.count_square(x0, y0, edge);
  if (count == 0) fail(ErrorCode::EmptySquare, "no net point in the square");
  double expect = alpha * static_cast<double>(edge) * edge;
  return std::max(expect / count, count / expect);
}

EAlphaStat E_alpha(int j, const CellCounts& cells, const Window& safe,
                   double alpha, const SquareSampler& sampler) {
  if (j < 0) fail(ErrorCode::InvalidArgument, "j must be >= 0");
  EAlphaStat stat;
  stat.j = j;
  stat.edge = 1 << j;
  const double tol = 1e-9;
  int xLo = static_cast<int>(std::ceil(safe.corner.x - tol));
  int yLo = static_cast<int>(std::ceil(safe.corner.y - tol));
  int xHi = static_cast<int>(std::floor(safe.corner.x + safe.edge + tol)) -
            stat.edge;
  int yHi = static_cast<int>(std::floor(safe.corner.y + safe.edge + tol)) -
            stat.edge;
  std::int64_t nx = xHi - xLo + 1, ny = yHi - yLo + 1;
  if (nx <= 0 || ny <= 0)
    fail(ErrorCode::WindowTooSmall,
         "no square of edge " + std::to_string(stat.edge) +
             " fits the safe region");
  stat.positions = nx * ny;

  auto probe = [&](int x0, int y0) {
    ++stat.sampled;
    std::int64_t count = cells.count_square(x0, y0, stat.edge);
    if (count == 0) {
      ++stat.emptySquares;
      return;
    }
    double expect = alpha * static_cast<double>(stat.edge) * stat.edge;
    double e = std::max(expect / count, count / expect);
    if (e > stat.maxE) {
      stat.maxE = e;
      stat.worst = {x0, y0, stat.edge, count, e};
    }
  };

  if (stat.positions <= sampler.cap) {
    for (int x = xLo; x <= xHi; ++x)
      for (int y = yLo; y <= yHi; ++y) probe(x, y);
  } else {
    Rng rng(mix_seed(sampler.seed, static_cast<std::uint64_t>(j)));
    for (std::int64_t k = 0; k < sampler.cap; ++k) {
      std::uint64_t idx = rng.next_below(static_cast<std::uint64_t>(stat.positions));
      probe(xLo + static_cast<int>(idx / ny), yLo + static_cast<int>(idx % ny));
    }
  }
  return stat;
}

BkReport bk_scan(const NetWindow& net, double alpha, int jmin, int jmax,
                 const SquareSampler& sampler) {
  if (jmin < 0 || jmax < jmin) fail(ErrorCode::InvalidArgument, "bad j range");
  BkReport report;
  report.alpha = alpha;
  report.safe = safe_window(net, default_margin(net));
  CellCounts cells(net);
  double product = 1.0;
  for (int j = jmin; j <= jmax; ++j) {
    EAlphaStat stat = E_alpha(j, cells, report.safe, alpha, sampler);
    report.emptySquareWarnings += stat.emptySquares;
    // A level where every sampled square was empty contributes no factor;
    // the product starts at the first admissible j.
    if (stat.sampled > stat.emptySquares) product *= stat.maxE;
    report.levels.push_back(stat);
    report.productPartials.push_back(product);
  }
  std::vector<double> xs, ys;
  for (const auto& s : report.levels) {
    if (s.sampled > s.emptySquares && s.maxE - 1.0 > 1e-12) {
      xs.push_back(s.j);
      ys.push_back(std::log(s.maxE - 1.0));
    }
  }
  report.omegaFit = xs.size() >= 2 ? std::exp(fit_slope(xs, ys)) : 0.0;
  return report;
}

double laczkovich_ratio(const CubeUnion& u, const NetWindow& net, double alpha,
                        const Window* safe) {
  if (u.area() <= 0) fail(ErrorCode::EmptyWindow, "cube union is empty");
  int bx0, by0, bx1, by1;
  u.bbox(&bx0, &by0, &bx1, &by1);
  if (safe) {
    const double tol = 1e-9;
    if (bx0 < safe->corner.x - tol || by0 < safe->corner.y - tol ||
        bx1 + 1 > safe->corner.x + safe->edge + tol ||
        by1 + 1 > safe->corner.y + safe->edge + tol)
      fail(ErrorCode::OutsideSafeRegion,
           "cube union leaves the safe evaluation region");
  }
  std::int64_t count = 0;
  for (const auto& [ix, iy] : u.cells())
    count += net.index.count_box({static_cast<double>(ix),
                                  static_cast<double>(iy)},
                                 {static_cast<double>(ix + 1),
                                  static_cast<double>(iy + 1)});
  double mu = u.area();
  double perim = boundary_measure(u);
  return std::abs(static_cast<double>(count) - alpha * mu) / perim;
}

NetWindow rescale_for_unit_cells(const NetWindow& net, double* factorOut,
                                 double* alphaScaledOut, double alpha) {
  if (!net.rule)
    fail(ErrorCode::InvalidArgument,
         "rescaling needs rule provenance for the tile inradius");
  double inr = net.rule->min_inradius() * net.scale;
  if (!(inr > 0)) fail(ErrorCode::InvalidArgument, "degenerate tile inradius");
  double factor = 1.0 / inr;
  if (factorOut) *factorOut = factor;
  if (alphaScaledOut) *alphaScaledOut = alpha * inr * inr;
  return net.scaled(factor);
}

CubeUnion random_window(int cells, const Window& safe, Rng& rng) {
  const double tol = 1e-9;
  int bx0 = static_cast<int>(std::ceil(safe.corner.x - tol));
  int by0 = static_cast<int>(std::ceil(safe.corner.y - tol));
  int bx1 = static_cast<int>(std::floor(safe.corner.x + safe.edge + tol)) - 1;
  int by1 = static_cast<int>(std::floor(safe.corner.y + safe.edge + tol)) - 1;
  if (bx1 < bx0 || by1 < by0)
    fail(ErrorCode::WindowTooSmall, "safe region holds no integer cell");
  int w = bx1 - bx0 + 1, h = by1 - by0 + 1;
  std::pair<int, int> start{
      bx0 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(w))),
      by0 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(h)))};
  return grow_polyomino(cells, start, bx0, by0, bx1, by1, rng.next_u64());
}

LaczkovichReport laczkovich_scan(const NetWindow& net, double alpha,
                                 int windows, int minCells, int maxCells,
                                 std::uint64_t seed) {
  if (windows < 1 || minCells < 1 || maxCells < minCells)
    fail(ErrorCode::InvalidArgument, "bad window schedule");
  Window safe = safe_window(net, default_margin(net));
  LaczkovichReport report;
  report.alpha = alpha;
  report.scale = net.scale;
  std::vector<double> xs, ys;
  for (int k = 0; k < windows; ++k) {
    double t = windows == 1 ? 0.0 : static_cast<double>(k) / (windows - 1);
    int target = static_cast<int>(std::lround(
        std::exp(std::log(static_cast<double>(minCells)) * (1 - t) +
                 std::log(static_cast<double>(maxCells)) * t)));
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
    CubeUnion u = random_window(target, safe, rng);
    LaczkovichSample s;
    s.windowId = k;
    s.cells = static_cast<std::int64_t>(u.area());
    s.boundary = boundary_measure(u);
    s.ratio = laczkovich_ratio(u, net, alpha, &safe);
    report.maxRatio = std::max(report.maxRatio, s.ratio);
    if (s.ratio > 1e-12) {
      xs.push_back(std::log(static_cast<double>(s.cells)));
      ys.push_back(std::log(s.ratio));
    }
    report.samples.push_back(s);
  }
  report.loglogSlope = xs.size() >= 2 ? fit_slope(xs, ys) : 0.0;
  return report;
}

// ---------------------------------------------------------------------------
// Layer decomposition

PlacedTile Hierarchy::root() const {
  PlacedTile t;
  t.tileId = static_cast<std::int16_t>(rootType);
  t.level = static_cast<std::int16_t>(rootLevel);
  return t;
}

std::vector<PlacedTile> Hierarchy::children_of(const PlacedTile& t) const {
  std::vector<PlacedTile> out;
  const auto& kids = rule->children_of(t.tileId);
  out.reserve(kids.size());
  for (int c = 0; c < static_cast<int>(kids.size()); ++c)
    out.push_back(place_child(*rule, t, c, rootLevel));
  return out;
}

std::vector<Vec2> Hierarchy::polygon_of(const PlacedTile& t) const {
  const BasicTile& base = rule->tile(t.tileId);
  double s = std::pow(rule->xi(), t.level);
  Isometry iso = t.placement();
  std::vector<Vec2> out;
  out.reserve(base.polygon.size());
  for (Vec2 v : base.polygon) out.push_back(rule->apply(iso, v * s) * scale);
  return out;
}

double Hierarchy::area_of(const PlacedTile& t) const {
  return rule->tile(t.tileId).area * std::pow(rule->xi(), 2.0 * t.level) *
         scale * scale;
}

namespace {

// Integer cells whose (slightly shrunk) interior meets the polygon.  The
// shrink keeps boundary-touching cells out, so "all cells inside U" is the
// cell-level reading of int(T) subset of U; slivers thinner than the shrink
// can be missed, which the partition tolerances (relative 1e-6) absorb.
constexpr double kCellShrink = 1e-7;

bool cells_inside(const std::vector<Vec2>& poly, const CubeUnion& u,
                  bool* anyCell) {
  double minX = poly[0].x, maxX = minX, minY = poly[0].y, maxY = minY;
  for (Vec2 v : poly) {
    minX = std::min(minX, v.x);
    maxX = std::max(maxX, v.x);
    minY = std::min(minY, v.y);
    maxY = std::max(maxY, v.y);
  }
  *anyCell = false;
  for (int ix = static_cast<int>(std::floor(minX));
       ix <= static_cast<int>(std::floor(maxX)); ++ix)
    for (int iy = static_cast<int>(std::floor(minY));
         iy <= static_cast<int>(std::floor(maxY)); ++iy) {
      if (!polygon_intersects_box(poly,
                                  {ix + kCellShrink, iy + kCellShrink},
                                  {ix + 1 - kCellShrink, iy + 1 - kCellShrink}))
        continue;
      *anyCell = true;
      if (!u.contains_cell(ix, iy)) return false;
    }
  return *anyCell;
}

struct LayerWalker {
  const Hierarchy& hier;
  const CubeUnion& u;
  int levelN;
  double ux0, uy0, ux1, uy1;  // window bbox in scaled coordinates
  std::vector<std::vector<PlacedTile>>& assigned;

  void visit(const PlacedTile& t) {
    std::vector<Vec2> poly = hier.polygon_of(t);
    double minX = poly[0].x, maxX = minX, minY = poly[0].y, maxY = minY;
    for (Vec2 v : poly) {
      minX = std::min(minX, v.x);
      maxX = std::max(maxX, v.x);
      minY = std::min(minY, v.y);
      maxY = std::max(maxY, v.y);
    }
    if (maxX < ux0 || maxY < uy0 || minX > ux1 || minY > uy1) return;
    bool anyCell = false;
    if (cells_inside(poly, u, &anyCell)) {
      assigned[t.level].push_back(t);
      return;
    }
    if (t.level <= levelN) return;
    for (const PlacedTile& c : hier.children_of(t)) visit(c);
  }
};

}  // namespace

LayerDecomposition layer_decomposition(const CubeUnion& u,
                                       const Hierarchy& hierarchy, int levelN,
                                       const CellCounts& cells, double alpha) {
  if (!hierarchy.rule) fail(ErrorCode::InvalidArgument, "hierarchy has no rule");
  if (levelN < 0 || levelN > hierarchy.rootLevel)
    fail(ErrorCode::InvalidArgument, "layer floor outside [0, rootLevel]");
  if (u.area() <= 0) fail(ErrorCode::EmptyWindow, "cube union is empty");

  std::vector<std::vector<PlacedTile>> assigned(hierarchy.rootLevel + 1);
  int bx0, by0, bx1, by1;
  u.bbox(&bx0, &by0, &bx1, &by1);
  LayerWalker walker{hierarchy,
                     u,
                     levelN,
                     static_cast<double>(bx0),
                     static_cast<double>(by0),
                     static_cast<double>(bx1 + 1),
                     static_cast<double>(by1 + 1),
                     assigned};
  walker.visit(hierarchy.root());

  // Combinatorial per-layer point counts: a level-l supertile of type i
  // contains exactly 1^t A^l e_i net points.
  SubstMatrix a = substitution_matrix(*hierarchy.rule);
  const int n = a.size();
  std::vector<std::vector<std::int64_t>> totals(hierarchy.rootLevel + 1,
                                                std::vector<std::int64_t>(n));
  {
    std::vector<std::vector<std::int64_t>> pow(n);
    for (int i = 0; i < n; ++i) {
      pow[i].assign(n, 0);
      pow[i][i] = 1;
    }
    for (int l = 0; l <= hierarchy.rootLevel; ++l) {
      for (int i = 0; i < n; ++i) {
        std::int64_t s = 0;
        for (int k = 0; k < n; ++k) s += pow[i][k];
        totals[l][i] = s;
      }
      if (l < hierarchy.rootLevel)
        for (int i = 0; i < n; ++i) pow[i] = a.apply(pow[i]);
    }
  }

  LayerDecomposition out;
  out.bottomLevel = levelN;
  out.topLevel = levelN - 1;
  out.windowMeasure = u.area();
  out.windowPoints = 0;
  for (const auto& [ix, iy] : u.cells())
    out.windowPoints += cells.count_cell(ix, iy);

  double measureSum = 0.0;
  std::int64_t pointSum = 0;
  for (int l = hierarchy.rootLevel; l >= levelN; --l) {
    if (!assigned[l].empty() && out.topLevel < l) out.topLevel = l;
  }
  for (int l = std::max(out.topLevel, levelN); l >= levelN; --l) {
    LayerStats ls;
    ls.level = l;
    for (const PlacedTile& t : assigned[l]) {
      ++ls.tileCount;
      ls.measure += hierarchy.area_of(t);
      ls.points += totals[l][t.tileId - 1];
    }
    ls.discrepancy = std::abs(static_cast<double>(ls.points) -
                              alpha * ls.measure);
    measureSum += ls.measure;
    pointSum += ls.points;
    out.layers.push_back(ls);
    out.layerTiles.push_back(assigned[l]);
  }
  out.boundaryMeasure = out.windowMeasure - measureSum;
  out.boundaryPoints = out.windowPoints - pointSum;
  out.partitionResidual =
      std::abs(out.windowMeasure - measureSum - out.boundaryMeasure);
  return out;
}

std::pair<double, double> boundary_measure_mc(const CubeUnion& u,
                                              const Hierarchy& hierarchy,
                                              const LayerDecomposition& dec,
                                              int samplesPerCell,
                                              std::uint64_t seed) {
  // Assigned tiles have pairwise disjoint interiors, so coverage is simply
  // "inside some assigned tile".  Per layer: cached polygons plus a bucket
  // index over circumcircle centers keeps the per-sample cost O(1).
  struct LayerGeom {
    std::vector<std::vector<Vec2>> polys;
    std::vector<Vec2> centers;
    GridIndex index;
    double radius = 0.0;
  };
  std::vector<LayerGeom> geoms;
  for (const auto& layer : dec.layerTiles) {
    LayerGeom g;
    for (const PlacedTile& t : layer) {
      std::vector<Vec2> poly = hierarchy.polygon_of(t);
      Vec2 c = polygon_centroid(poly);
      for (Vec2 v : poly) g.radius = std::max(g.radius, dist(c, v));
      g.centers.push_back(c);
      g.polys.push_back(std::move(poly));
    }
    if (!g.centers.empty())
      g.index = GridIndex(g.centers, std::max(1e-9, g.radius));
    geoms.push_back(std::move(g));
  }
  auto covered = [&](Vec2 p) {
    for (const LayerGeom& g : geoms) {
      if (g.centers.empty()) continue;
      bool hit = false;
      g.index.for_each_in_disk(p, g.radius, [&](std::uint32_t i) {
        if (!hit && point_in_polygon(p, g.polys[i])) hit = true;
      });
      if (hit) return true;
    }
    return false;
  };

  int side = std::max(1, static_cast<int>(std::lround(
                             std::sqrt(static_cast<double>(samplesPerCell)))));
  double est = 0.0, var = 0.0;
  std::size_t cellIdx = 0;
  for (const auto& [ix, iy] : u.cells()) {
    Rng rng(mix_seed(seed, cellIdx++));
    std::int64_t uncovered = 0;
    for (int sx = 0; sx < side; ++sx)
      for (int sy = 0; sy < side; ++sy) {
        Vec2 p{ix + (sx + rng.next_double()) / side,
               iy + (sy + rng.next_double()) / side};
        if (!covered(p)) ++uncovered;
      }
    double total = static_cast<double>(side) * side;
    double frac = uncovered / total;
    est += frac;
    var += frac * (1.0 - frac) / total;
  }
  return {est, std::sqrt(var)};
}

double tile_discrepancy(int tileType, int m, const NetWindow& net,
                        double alpha) {
  if (!net.rule)
    fail(ErrorCode::InvalidArgument,
         "tile discrepancy needs rule provenance");
  const SubstitutionRule& rule = *net.rule;
  SubstMatrix a = substitution_matrix(rule);
  std::vector<double> areas;
  for (const auto& t : rule.tiles()) areas.push_back(t.area);
  SpectralReport report = spectral_report(a, areas);
  // The caller's density must be the rule's own (up to the net rescaling).
  double alphaRule = report.alpha / (net.scale * net.scale);
  if (std::abs(alpha - alphaRule) > 1e-9 * alphaRule)
    fail(ErrorCode::InvalidArgument,
         "alpha does not match the rule density at this scale");
  return tile_discrepancy(a, areas, report, tileType, m);
}

}  // namespace tilenet
