#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tilenet/error.hpp"

namespace tilenet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double px, double py) : x(px), y(py) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);
double dist(Vec2 a, Vec2 b);

// Axis-aligned square window, the basic evaluation region for nets.
struct Window {
  Vec2 corner;   // lower-left corner
  double edge = 0.0;

  Vec2 max_corner() const { return {corner.x + edge, corner.y + edge}; }
  Vec2 center() const { return {corner.x + edge / 2, corner.y + edge / 2}; }
  bool contains(Vec2 p, double tol = 0.0) const {
    return p.x >= corner.x - tol && p.y >= corner.y - tol &&
           p.x <= corner.x + edge + tol && p.y <= corner.y + edge + tol;
  }
  // Window shrunk by `margin` on every side; edge clamps at zero.
  Window eroded(double margin) const;
};

// Signed area is positive for counter-clockwise vertex order; callers that
// need the plain measure take the absolute value.  Throws DegeneratePolygon
// when fewer than 3 vertices or |area| < 1e-12.
double polygon_area(std::span<const Vec2> polygon);
Vec2 polygon_centroid(std::span<const Vec2> polygon);
double polygon_perimeter(std::span<const Vec2> polygon);

// Crossing-number test; points exactly on the boundary may land on either
// side, so callers that care use distance_to_boundary as a tolerance gate.
bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon);
double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);
double distance_to_boundary(Vec2 p, std::span<const Vec2> polygon);
// Inside by more than `tol` (positive distance from the boundary).
bool strictly_inside(Vec2 p, std::span<const Vec2> polygon, double tol);

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
// Exact test for a simple polygon against an axis-aligned box.
bool polygon_intersects_box(std::span<const Vec2> polygon, Vec2 lo, Vec2 hi);

// Radius of the largest inscribed circle, found by seeded grid refinement.
// Accurate to ~1e-6 of the bounding box, which is all the callers need.
double polygon_inradius(std::span<const Vec2> polygon);

// Largest axis-aligned square contained in a simple polygon, located by
// binary search over the edge length with a deterministic grid scan for the
// corner.  The result is conservative (never overshoots the polygon).
Window largest_inscribed_square(std::span<const Vec2> polygon);

// Uniform bucket grid over 2-D points; deterministic CSR layout.
class GridIndex {
 public:
  GridIndex() = default;
  GridIndex(std::span<const Vec2> points, double bucket);

  double bucket() const { return bucket_; }
  std::size_t size() const { return points_.size(); }

  // Indices of points with lo <= p < hi (half-open box).
  std::vector<std::uint32_t> query_box(Vec2 lo, Vec2 hi) const;
  std::int64_t count_box(Vec2 lo, Vec2 hi) const;
  // Index of the nearest point, or -1 when the index is empty.  `maxDist`
  // bounds the search; pass a non-positive value for unbounded.
  std::int64_t nearest(Vec2 p, double maxDist, double* bestDist) const;
  template <class F>
  void for_each_in_disk(Vec2 c, double radius, F&& fn) const {
    auto lo = Vec2{c.x - radius, c.y - radius};
    auto hi = Vec2{c.x + radius, c.y + radius};
    for (std::uint32_t i : query_box(lo, {hi.x + bucket_, hi.y + bucket_})) {
      if (dist(points_[i], c) <= radius) fn(i);
    }
  }

 private:
  // Lexicographic (ix, iy) bucket key.  The bias keeps both halves
  // non-negative, so int64 order equals cell order and per-stripe
  // [kLo, kHi] range scans are valid for any sign of iy.
  static constexpr std::int64_t kCellBias = std::int64_t{1} << 30;
  static std::int64_t cell_key(std::int64_t ix, std::int64_t iy) {
    return ((ix + kCellBias) << 32) | ((iy + kCellBias) & 0xffffffffLL);
  }
  std::int64_t key_of(double x, double y) const;
  std::vector<Vec2> points_;
  std::vector<std::int64_t> keys_;       // sorted unique bucket keys
  std::vector<std::uint32_t> starts_;    // CSR offsets into ids_
  std::vector<std::uint32_t> ids_;       // point indices grouped by bucket
  double bucket_ = 1.0;
};

// Finite union of closed unit cells [i,i+1]x[j,j+1], the window class used
// for the boundary-vs-count inequality.  Cells are stored sorted.
class CubeUnion {
 public:
  CubeUnion() = default;
  explicit CubeUnion(std::vector<std::pair<int, int>> cells);

  const std::vector<std::pair<int, int>>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool contains_cell(int ix, int iy) const;
  bool contains_point(Vec2 p) const;  // half-open cell convention
  double area() const { return static_cast<double>(cells_.size()); }
  void bbox(int* x0, int* y0, int* x1, int* y1) const;  // inclusive cells

  // Boundary edges as segments (unit axis segments adjacent to exactly one
  // cell of the union).
  std::vector<std::pair<Vec2, Vec2>> boundary_edges() const;

 private:
  std::vector<std::pair<int, int>> cells_;
  std::vector<std::int64_t> keys_;  // sorted packed cells for lookup
};

// Total length of the topological boundary (count of exposed unit edges).
double boundary_measure(const CubeUnion& u);

// Monte-Carlo measure of { x in U : dist(x, boundary U) <= s }, stratified
// per cell with `samplesPerCell` jittered points.  Deterministic per seed.
double inner_layer_measure(const CubeUnion& u, double s, std::uint64_t seed,
                           int samplesPerCell = 1024);

// Connected random polyomino grown by uniform frontier expansion from
// `start`, constrained to the inclusive cell box [bx0,bx1]x[by0,by1].
CubeUnion grow_polyomino(int targetCells, std::pair<int, int> start, int bx0,
                         int by0, int bx1, int by1, std::uint64_t seed);

// Least-squares slope of y against x.  Used by the various decay-rate fits.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace tilenet
