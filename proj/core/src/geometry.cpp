#include "tilenet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tilenet/rng.hpp"

namespace tilenet {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedPolygon: return "MalformedPolygon";
    case ErrorCode::ChildOutsideParent: return "ChildOutsideParent";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::EmptyPatch: return "EmptyPatch";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::PowerIterationStalled: return "PowerIterationStalled";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::EmptySquare: return "EmptySquare";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::OutsideSafeRegion: return "OutsideSafeRegion";
    case ErrorCode::NoPerfectMatchingUnderCap: return "NoPerfectMatchingUnderCap";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double dist(Vec2 a, Vec2 b) { return norm(a - b); }

Window Window::eroded(double margin) const {
  Window w;
  w.corner = {corner.x + margin, corner.y + margin};
  w.edge = std::max(0.0, edge - 2 * margin);
  return w;
}

double polygon_area(std::span<const Vec2> polygon) {
  if (polygon.size() < 3)
    fail(ErrorCode::DegeneratePolygon, "polygon needs at least 3 vertices");
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    Vec2 a = polygon[i];
    Vec2 b = polygon[(i + 1) % polygon.size()];
    twice += cross(a, b);
  }
  double area = twice / 2.0;
  if (std::abs(area) < 1e-12)
    fail(ErrorCode::DegeneratePolygon, "polygon area below 1e-12");
  return area;
}

Vec2 polygon_centroid(std::span<const Vec2> polygon) {
  double twice = 0.0;
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    Vec2 a = polygon[i];
    Vec2 b = polygon[(i + 1) % polygon.size()];
    double w = cross(a, b);
    twice += w;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  if (std::abs(twice) < 1e-12)
    fail(ErrorCode::DegeneratePolygon, "centroid of degenerate polygon");
  return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

double polygon_perimeter(std::span<const Vec2> polygon) {
  double len = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i)
    len += dist(polygon[i], polygon[(i + 1) % polygon.size()]);
  return len;
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon) {
  bool inside = false;
  std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    Vec2 a = polygon[i], b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xCross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (p.x < xCross) inside = !inside;
    }
  }
  return inside;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 <= 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + ab * t);
}

double distance_to_boundary(Vec2 p, std::span<const Vec2> polygon) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    best = std::min(best, distance_to_segment(p, polygon[i],
                                              polygon[(i + 1) % polygon.size()]));
  }
  return best;
}

bool strictly_inside(Vec2 p, std::span<const Vec2> polygon, double tol) {
  return point_in_polygon(p, polygon) && distance_to_boundary(p, polygon) > tol;
}

namespace {
int orient(Vec2 a, Vec2 b, Vec2 c) {
  double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}
bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}
}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool polygon_intersects_box(std::span<const Vec2> polygon, Vec2 lo, Vec2 hi) {
  // Quick reject on bounding boxes.
  double px0 = polygon[0].x, px1 = polygon[0].x;
  double py0 = polygon[0].y, py1 = polygon[0].y;
  for (Vec2 v : polygon) {
    px0 = std::min(px0, v.x);
    px1 = std::max(px1, v.x);
    py0 = std::min(py0, v.y);
    py1 = std::max(py1, v.y);
  }
  if (px1 < lo.x || hi.x < px0 || py1 < lo.y || hi.y < py0) return false;

  // Polygon vertex inside box.
  for (Vec2 v : polygon) {
    if (v.x >= lo.x && v.x <= hi.x && v.y >= lo.y && v.y <= hi.y) return true;
  }
  // Box corner inside polygon.
  const Vec2 corners[4] = {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
  for (Vec2 c : corners) {
    if (point_in_polygon(c, polygon)) return true;
  }
  // Edge crossings.
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    Vec2 a = polygon[i], b = polygon[(i + 1) % polygon.size()];
    for (int e = 0; e < 4; ++e) {
      if (segments_intersect(a, b, corners[e], corners[(e + 1) % 4])) return true;
    }
  }
  return false;
}

double polygon_inradius(std::span<const Vec2> polygon) {
  double px0 = polygon[0].x, px1 = polygon[0].x;
  double py0 = polygon[0].y, py1 = polygon[0].y;
  for (Vec2 v : polygon) {
    px0 = std::min(px0, v.x);
    px1 = std::max(px1, v.x);
    py0 = std::min(py0, v.y);
    py1 = std::max(py1, v.y);
  }
  const int kGrid = 48;
  double sx = (px1 - px0) / kGrid, sy = (py1 - py0) / kGrid;
  Vec2 best{(px0 + px1) / 2, (py0 + py1) / 2};
  double bestDist = point_in_polygon(best, polygon)
                        ? distance_to_boundary(best, polygon)
                        : -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    for (int j = 0; j <= kGrid; ++j) {
      Vec2 p{px0 + i * sx, py0 + j * sy};
      if (!point_in_polygon(p, polygon)) continue;
      double d = distance_to_boundary(p, polygon);
      if (d > bestDist) {
        bestDist = d;
        best = p;
      }
    }
  }
  // Local refinement around the best grid point.
  double step = std::max(sx, sy);
  for (int round = 0; round < 24; ++round) {
    bool improved = false;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        Vec2 p{best.x + di * step, best.y + dj * step};
        if (!point_in_polygon(p, polygon)) continue;
        double d = distance_to_boundary(p, polygon);
        if (d > bestDist) {
          bestDist = d;
          best = p;
          improved = true;
        }
      }
    }
    if (!improved) step /= 2;
  }
  if (bestDist <= 0)
    fail(ErrorCode::DegeneratePolygon, "no interior point found for inradius");
  return bestDist;
}

namespace {
bool square_inside_polygon(std::span<const Vec2> polygon, Vec2 corner,
                           double edge) {
  const Vec2 c[4] = {corner,
                     {corner.x + edge, corner.y},
                     {corner.x + edge, corner.y + edge},
                     {corner.x, corner.y + edge}};
  for (Vec2 v : c) {
    if (!point_in_polygon(v, polygon)) return false;
  }
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    Vec2 a = polygon[i], b = polygon[(i + 1) % polygon.size()];
    for (int e = 0; e < 4; ++e) {
      if (segments_intersect(a, b, c[e], c[(e + 1) % 4])) return false;
    }
  }
  return true;
}

bool find_square_corner(std::span<const Vec2> polygon, double edge, double px0,
                        double py0, double px1, double py1, Vec2* out) {
  const int kGrid = 64;
  double rx = px1 - px0 - edge, ry = py1 - py0 - edge;
  if (rx < 0 || ry < 0) return false;
  for (int i = 0; i <= kGrid; ++i) {
    for (int j = 0; j <= kGrid; ++j) {
      Vec2 corner{px0 + rx * i / kGrid, py0 + ry * j / kGrid};
      if (square_inside_polygon(polygon, corner, edge)) {
        *out = corner;
        return true;
      }
    }
  }
  return false;
}
}  // namespace

Window largest_inscribed_square(std::span<const Vec2> polygon) {
  double px0 = polygon[0].x, px1 = polygon[0].x;
  double py0 = polygon[0].y, py1 = polygon[0].y;
  for (Vec2 v : polygon) {
    px0 = std::min(px0, v.x);
    px1 = std::max(px1, v.x);
    py0 = std::min(py0, v.y);
    py1 = std::max(py1, v.y);
  }
  double lo = 0.0, hi = std::min(px1 - px0, py1 - py0);
  Vec2 bestCorner{0, 0};
  bool any = false;
  for (int iter = 0; iter < 40; ++iter) {
    double mid = (lo + hi) / 2;
    Vec2 corner;
    if (mid > 0 && find_square_corner(polygon, mid, px0, py0, px1, py1, &corner)) {
      lo = mid;
      bestCorner = corner;
      any = true;
    } else {
      hi = mid;
    }
  }
  if (!any) fail(ErrorCode::WindowTooSmall, "no inscribed square found");
  return Window{bestCorner, lo};
}

// ---------------------------------------------------------------------------
// GridIndex

std::int64_t GridIndex::key_of(double x, double y) const {
  auto ix = static_cast<std::int64_t>(std::floor(x / bucket_));
  auto iy = static_cast<std::int64_t>(std::floor(y / bucket_));
  return cell_key(ix, iy);
}

GridIndex::GridIndex(std::span<const Vec2> points, double bucket)
    : points_(points.begin(), points.end()), bucket_(bucket) {
  if (bucket_ <= 0) fail(ErrorCode::InvalidArgument, "bucket size must be > 0");
  std::vector<std::pair<std::int64_t, std::uint32_t>> tagged(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    tagged[i] = {key_of(points_[i].x, points_[i].y),
                 static_cast<std::uint32_t>(i)};
  std::sort(tagged.begin(), tagged.end());
  keys_.reserve(tagged.size() / 2);
  ids_.resize(tagged.size());
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    if (i == 0 || tagged[i].first != tagged[i - 1].first) {
      keys_.push_back(tagged[i].first);
      starts_.push_back(static_cast<std::uint32_t>(i));
    }
    ids_[i] = tagged[i].second;
  }
  starts_.push_back(static_cast<std::uint32_t>(tagged.size()));
}

std::vector<std::uint32_t> GridIndex::query_box(Vec2 lo, Vec2 hi) const {
  std::vector<std::uint32_t> out;
  if (points_.empty()) return out;
  auto bx0 = static_cast<std::int64_t>(std::floor(lo.x / bucket_));
  auto bx1 = static_cast<std::int64_t>(std::floor(hi.x / bucket_));
  auto by0 = static_cast<std::int64_t>(std::floor(lo.y / bucket_));
  auto by1 = static_cast<std::int64_t>(std::floor(hi.y / bucket_));
  for (std::int64_t ix = bx0; ix <= bx1; ++ix) {
    std::int64_t kLo = cell_key(ix, by0);
    std::int64_t kHi = cell_key(ix, by1);
    auto itLo = std::lower_bound(keys_.begin(), keys_.end(), kLo);
    auto itHi = std::upper_bound(keys_.begin(), keys_.end(), kHi);
    for (auto it = itLo; it != itHi; ++it) {
      std::size_t b = static_cast<std::size_t>(it - keys_.begin());
      for (std::uint32_t k = starts_[b]; k < starts_[b + 1]; ++k) {
        Vec2 p = points_[ids_[k]];
        if (p.x >= lo.x && p.x < hi.x && p.y >= lo.y && p.y < hi.y)
          out.push_back(ids_[k]);
      }
    }
  }
  return out;
}

std::int64_t GridIndex::count_box(Vec2 lo, Vec2 hi) const {
  if (points_.empty()) return 0;
  std::int64_t count = 0;
  auto bx0 = static_cast<std::int64_t>(std::floor(lo.x / bucket_));
  auto bx1 = static_cast<std::int64_t>(std::floor(hi.x / bucket_));
  auto by0 = static_cast<std::int64_t>(std::floor(lo.y / bucket_));
  auto by1 = static_cast<std::int64_t>(std::floor(hi.y / bucket_));
  for (std::int64_t ix = bx0; ix <= bx1; ++ix) {
    std::int64_t kLo = cell_key(ix, by0);
    std::int64_t kHi = cell_key(ix, by1);
    auto itLo = std::lower_bound(keys_.begin(), keys_.end(), kLo);
    auto itHi = std::upper_bound(keys_.begin(), keys_.end(), kHi);
    for (auto it = itLo; it != itHi; ++it) {
      std::size_t b = static_cast<std::size_t>(it - keys_.begin());
      for (std::uint32_t k = starts_[b]; k < starts_[b + 1]; ++k) {
        Vec2 p = points_[ids_[k]];
        if (p.x >= lo.x && p.x < hi.x && p.y >= lo.y && p.y < hi.y) ++count;
      }
    }
  }
  return count;
}

std::int64_t GridIndex::nearest(Vec2 p, double maxDist, double* bestDist) const {
  if (points_.empty()) return -1;
  auto cx = static_cast<std::int64_t>(std::floor(p.x / bucket_));
  auto cy = static_cast<std::int64_t>(std::floor(p.y / bucket_));
  std::int64_t best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (std::int64_t ring = 0;; ++ring) {
    // Once a candidate is known, stop when the next ring cannot beat it.
    double ringFloor = (ring - 1) * bucket_;
    if (best >= 0 && ringFloor > bd) break;
    if (maxDist > 0 && ringFloor > maxDist) break;
    bool visited = false;
    for (std::int64_t ix = cx - ring; ix <= cx + ring; ++ix) {
      for (std::int64_t iy = cy - ring; iy <= cy + ring; ++iy) {
        if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
        std::int64_t key = cell_key(ix, iy);
        auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
        if (it == keys_.end() || *it != key) continue;
        visited = true;
        std::size_t b = static_cast<std::size_t>(it - keys_.begin());
        for (std::uint32_t k = starts_[b]; k < starts_[b + 1]; ++k) {
          double d = dist(points_[ids_[k]], p);
          if (d < bd) {
            bd = d;
            best = ids_[k];
          }
        }
      }
    }
    (void)visited;
    if (best < 0 && ring > 64) {
      // The grid is much finer than the distance to the nearest point
      // (degenerate bucket sizes do this); finish with a direct scan
      // rather than walking millions of empty rings.
      for (std::size_t i = 0; i < points_.size(); ++i) {
        double d = dist(points_[i], p);
        if (d < bd) {
          bd = d;
          best = static_cast<std::int64_t>(i);
        }
      }
      break;
    }
  }
  if (bestDist) *bestDist = bd;
  if (maxDist > 0 && bd > maxDist) return -1;
  return best;
}

// ---------------------------------------------------------------------------
// CubeUnion

namespace {
std::int64_t pack_cell(int ix, int iy) {
  return (static_cast<std::int64_t>(ix) << 32) ^
         (static_cast<std::int64_t>(iy) & 0xffffffffLL);
}
}  // namespace

CubeUnion::CubeUnion(std::vector<std::pair<int, int>> cells)
    : cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  keys_.reserve(cells_.size());
  for (auto [ix, iy] : cells_) keys_.push_back(pack_cell(ix, iy));
  std::sort(keys_.begin(), keys_.end());
}

bool CubeUnion::contains_cell(int ix, int iy) const {
  return std::binary_search(keys_.begin(), keys_.end(), pack_cell(ix, iy));
}

bool CubeUnion::contains_point(Vec2 p) const {
  return contains_cell(static_cast<int>(std::floor(p.x)),
                       static_cast<int>(std::floor(p.y)));
}

void CubeUnion::bbox(int* x0, int* y0, int* x1, int* y1) const {
  if (cells_.empty()) fail(ErrorCode::EmptyWindow, "empty cube union");
  *x0 = *x1 = cells_[0].first;
  *y0 = *y1 = cells_[0].second;
  for (auto [ix, iy] : cells_) {
    *x0 = std::min(*x0, ix);
    *x1 = std::max(*x1, ix);
    *y0 = std::min(*y0, iy);
    *y1 = std::max(*y1, iy);
  }
}

std::vector<std::pair<Vec2, Vec2>> CubeUnion::boundary_edges() const {
  std::vector<std::pair<Vec2, Vec2>> edges;
  for (auto [ix, iy] : cells_) {
    double x = ix, y = iy;
    if (!contains_cell(ix - 1, iy)) edges.push_back({{x, y}, {x, y + 1}});
    if (!contains_cell(ix + 1, iy)) edges.push_back({{x + 1, y}, {x + 1, y + 1}});
    if (!contains_cell(ix, iy - 1)) edges.push_back({{x, y}, {x + 1, y}});
    if (!contains_cell(ix, iy + 1)) edges.push_back({{x, y + 1}, {x + 1, y + 1}});
  }
  return edges;
}

double boundary_measure(const CubeUnion& u) {
  std::int64_t exposed = 0;
  for (auto [ix, iy] : u.cells()) {
    exposed += !u.contains_cell(ix - 1, iy);
    exposed += !u.contains_cell(ix + 1, iy);
    exposed += !u.contains_cell(ix, iy - 1);
    exposed += !u.contains_cell(ix, iy + 1);
  }
  return static_cast<double>(exposed);
}

double inner_layer_measure(const CubeUnion& u, double s, std::uint64_t seed,
                           int samplesPerCell) {
  if (u.size() == 0) fail(ErrorCode::EmptyWindow, "empty cube union");
  if (s <= 0) return 0.0;
  int reach = static_cast<int>(std::ceil(s)) + 1;
  int side = std::max(1, static_cast<int>(std::lround(std::sqrt(
                             static_cast<double>(samplesPerCell)))));
  double covered = 0.0;
  std::uint64_t cellIdx = 0;
  for (auto [ix, iy] : u.cells()) {
    // Collect boundary edges near this cell once; a sample is within s of
    // the boundary iff it is within s of one of these edges (edges farther
    // than `reach` cells cannot be within s <= reach - 1 + 1).
    std::vector<std::pair<Vec2, Vec2>> nearEdges;
    for (int dx = -reach; dx <= reach; ++dx) {
      for (int dy = -reach; dy <= reach; ++dy) {
        int jx = ix + dx, jy = iy + dy;
        if (!u.contains_cell(jx, jy)) continue;
        double x = jx, y = jy;
        if (!u.contains_cell(jx - 1, jy))
          nearEdges.push_back({{x, y}, {x, y + 1}});
        if (!u.contains_cell(jx + 1, jy))
          nearEdges.push_back({{x + 1, y}, {x + 1, y + 1}});
        if (!u.contains_cell(jx, jy - 1))
          nearEdges.push_back({{x, y}, {x + 1, y}});
        if (!u.contains_cell(jx, jy + 1))
          nearEdges.push_back({{x, y + 1}, {x + 1, y + 1}});
      }
    }
    Rng rng(mix_seed(seed, cellIdx++));
    int hit = 0;
    int total = side * side;
    for (int a = 0; a < side; ++a) {
      for (int b = 0; b < side; ++b) {
        Vec2 p{ix + (a + rng.next_double()) / side,
               iy + (b + rng.next_double()) / side};
        bool close = false;
        for (auto& e : nearEdges) {
          if (distance_to_segment(p, e.first, e.second) <= s) {
            close = true;
            break;
          }
        }
        hit += close;
      }
    }
    covered += static_cast<double>(hit) / total;
  }
  return covered;
}

CubeUnion grow_polyomino(int targetCells, std::pair<int, int> start, int bx0,
                         int by0, int bx1, int by1, std::uint64_t seed) {
  if (targetCells < 1) fail(ErrorCode::InvalidArgument, "targetCells >= 1");
  if (start.first < bx0 || start.first > bx1 || start.second < by0 ||
      start.second > by1)
    fail(ErrorCode::InvalidArgument, "start cell outside growth box");
  Rng rng(seed);
  std::vector<std::pair<int, int>> cells;
  std::vector<std::pair<int, int>> frontier;
  std::vector<std::int64_t> used;  // sorted membership of cells+frontier
  auto mark = [&](int ix, int iy) {
    auto key = pack_cell(ix, iy);
    auto it = std::lower_bound(used.begin(), used.end(), key);
    if (it != used.end() && *it == key) return false;
    used.insert(it, key);
    return true;
  };
  auto push_neighbors = [&](int ix, int iy) {
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int jx = ix + dx[k], jy = iy + dy[k];
      if (jx < bx0 || jx > bx1 || jy < by0 || jy > by1) continue;
      if (mark(jx, jy)) frontier.push_back({jx, jy});
    }
  };
  mark(start.first, start.second);
  cells.push_back(start);
  push_neighbors(start.first, start.second);
  while (static_cast<int>(cells.size()) < targetCells && !frontier.empty()) {
    std::size_t pick = rng.next_below(frontier.size());
    auto cell = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    cells.push_back(cell);
    push_neighbors(cell.first, cell.second);
  }
  if (static_cast<int>(cells.size()) < targetCells)
    fail(ErrorCode::WindowTooSmall, "growth box exhausted before target size");
  return CubeUnion(std::move(cells));
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    fail(ErrorCode::InvalidArgument, "fit_slope needs >= 2 paired samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) fail(ErrorCode::InvalidArgument, "fit_slope: degenerate x");
  return sxy / sxx;
}

}  // namespace tilenet
