#include "tilenet/substitution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tilenet {

namespace {
// Snap coefficients that are exactly representable so that axis-aligned
// rules (q = 4) keep integer vertices bit-exact under rotation.
double snap_trig(double v) {
  if (std::abs(v) < 1e-15) return 0.0;
  if (std::abs(v - 1.0) < 1e-15) return 1.0;
  if (std::abs(v + 1.0) < 1e-15) return -1.0;
  return v;
}
}  // namespace

SubstitutionRule::SubstitutionRule(
    std::string name, int q, double xi,
    std::vector<std::vector<Vec2>> polygons,
    std::vector<std::vector<ChildPlacement>> children)
    : name_(std::move(name)), q_(q), xi_(xi), children_(std::move(children)) {
  if (q_ < 1) fail(ErrorCode::SemanticError, "rotation order q must be >= 1");
  if (!(xi_ > 1.0)) fail(ErrorCode::SemanticError, "inflation constant must be > 1");
  if (polygons.empty()) fail(ErrorCode::SemanticError, "rule has no tiles");
  if (children_.size() != polygons.size())
    fail(ErrorCode::SemanticError, "children list count != tile count");

  cosTable_.resize(q_);
  sinTable_.resize(q_);
  for (int k = 0; k < q_; ++k) {
    long double a = 2.0L * std::numbers::pi_v<long double> * k / q_;
    cosTable_[k] = snap_trig(static_cast<double>(std::cos(a)));
    sinTable_[k] = snap_trig(static_cast<double>(std::sin(a)));
  }

  tiles_.reserve(polygons.size());
  for (std::size_t i = 0; i < polygons.size(); ++i) {
    BasicTile t;
    t.id = static_cast<int>(i) + 1;
    t.polygon = std::move(polygons[i]);
    double signedArea;
    try {
      signedArea = polygon_area(t.polygon);
    } catch (const Error&) {
      fail(ErrorCode::MalformedPolygon,
           "tile " + std::to_string(t.id) + " polygon is degenerate");
    }
    if (signedArea < 0)
      fail(ErrorCode::MalformedPolygon,
           "tile " + std::to_string(t.id) + " must be counter-clockwise");
    t.area = signedArea;
    t.centroid = polygon_centroid(t.polygon);
    double diam = 0.0;
    for (std::size_t a = 0; a < t.polygon.size(); ++a)
      for (std::size_t b = a + 1; b < t.polygon.size(); ++b)
        diam = std::max(diam, dist(t.polygon[a], t.polygon[b]));
    maxTileDiameter_ = std::max(maxTileDiameter_, diam);
    for (Vec2 v : t.polygon)
      maxCentroidRadius_ = std::max(maxCentroidRadius_, dist(v, t.centroid));
    tiles_.push_back(std::move(t));
  }
  minInradius_ = polygon_inradius(tiles_[0].polygon);
  for (const auto& t : tiles_)
    minInradius_ = std::min(minInradius_, polygon_inradius(t.polygon));

  for (std::size_t j = 0; j < children_.size(); ++j) {
    if (children_[j].empty())
      fail(ErrorCode::SemanticError,
           "tile " + std::to_string(j + 1) + " has no children");
    for (const auto& c : children_[j]) {
      if (c.tileId < 1 || c.tileId > tile_count())
        fail(ErrorCode::SemanticError,
             "child references unknown tile id " + std::to_string(c.tileId));
      if (c.iso.rot < 0 || c.iso.rot >= q_)
        fail(ErrorCode::SemanticError, "child rotation index out of range");
    }
    maxChildren_ = std::max(maxChildren_, static_cast<int>(children_[j].size()));
  }
  addressBits_ = 1;
  while ((1 << addressBits_) < maxChildren_) ++addressBits_;
}

Vec2 SubstitutionRule::apply(const Isometry& iso, Vec2 p) const {
  if (iso.reflect) p.y = -p.y;
  double c = cosTable_[iso.rot], s = sinTable_[iso.rot];
  return {c * p.x - s * p.y + iso.t.x, s * p.x + c * p.y + iso.t.y};
}

Isometry SubstitutionRule::compose(const Isometry& outer,
                                   const Isometry& inner) const {
  Isometry r;
  r.reflect = outer.reflect != inner.reflect;
  int inRot = outer.reflect ? (q_ - inner.rot) % q_ : inner.rot;
  r.rot = (outer.rot + inRot) % q_;
  r.t = apply(outer, inner.t);
  return r;
}

// ---------------------------------------------------------------------------
// Built-in rules

SubstitutionRule SubstitutionRule::penrose() {
  const double sqrt5 = std::sqrt(5.0);
  const double phi = (1.0 + sqrt5) / 2.0;
  const double cos36 = phi / 2.0;
  const double sin36 = std::sqrt(10.0 - 2.0 * sqrt5) / 4.0;
  const double cos72 = (sqrt5 - 1.0) / 4.0;
  const double sin72 = std::sqrt(10.0 + 2.0 * sqrt5) / 4.0;

  // Half-kite: golden triangle, unit short edge, legs phi.
  std::vector<Vec2> halfKite = {{0, 0}, {1, 0}, {0.5, phi * sin72}};
  // Half-dart: golden gnomon, base phi, legs 1.
  std::vector<Vec2> halfDart = {{0, 0}, {phi, 0}, {cos36, sin36}};

  // Dissections of the unit tiles into xi^-1 copies.  The two half-kite
  // children of the half-kite form a full kite cut along its axis, hence the
  // reflected second copy.
  std::vector<std::vector<ChildPlacement>> children(2);
  children[0] = {
      {1, {3, false, {1.0, 0.0}}},
      {1, {9, true, {cos72, sin72}}},
      {2, {3, false, {cos36, sin36}}},
  };
  children[1] = {
      {1, {3, false, {1.0, 0.0}}},
      {2, {4, false, {phi, 0.0}}},
  };
  return SubstitutionRule("penrose", 10, phi, {halfKite, halfDart},
                          std::move(children));
}

SubstitutionRule SubstitutionRule::chair() {
  std::vector<Vec2> ell = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  std::vector<std::vector<ChildPlacement>> children(1);
  children[0] = {
      {1, {0, false, {0.0, 0.0}}},
      {1, {1, false, {2.0, 0.0}}},
      {1, {3, false, {0.0, 2.0}}},
      {1, {0, false, {0.5, 0.5}}},
  };
  return SubstitutionRule("chair", 4, 2.0, {ell}, std::move(children));
}

RulePtr builtin_rule(const std::string& name) {
  if (name == "penrose")
    return std::make_shared<SubstitutionRule>(SubstitutionRule::penrose());
  if (name == "chair")
    return std::make_shared<SubstitutionRule>(SubstitutionRule::chair());
  fail(ErrorCode::InvalidArgument, "unknown built-in rule '" + name + "'");
}

// ---------------------------------------------------------------------------
// Patch

std::vector<Vec2> Patch::polygon_of(const PlacedTile& t) const {
  const BasicTile& base = rule->tile(t.tileId);
  double s = std::pow(rule->xi(), t.level);
  std::vector<Vec2> out;
  out.reserve(base.polygon.size());
  Isometry iso = t.placement();
  for (Vec2 v : base.polygon) out.push_back(rule->apply(iso, v * s));
  return out;
}

Vec2 Patch::centroid_of(const PlacedTile& t) const {
  const BasicTile& base = rule->tile(t.tileId);
  double s = std::pow(rule->xi(), t.level);
  Isometry iso = t.placement();
  return rule->apply(iso, base.centroid * s);
}

double Patch::area_of(const PlacedTile& t) const {
  return rule->tile(t.tileId).area * std::pow(rule->xi(), 2.0 * t.level);
}

double Patch::support_area() const {
  double a = 0.0;
  for (const auto& t : tiles) a += area_of(t);
  return a;
}

std::string Patch::address_string(const PlacedTile& t) const {
  int depth = rootLevel - t.level;
  int bits = rule->address_bits();
  std::string s;
  for (int k = 0; k < depth; ++k) {
    if (k) s += '.';
    s += std::to_string((t.address >> (bits * k)) & ((1u << bits) - 1));
  }
  return s;
}

// ---------------------------------------------------------------------------
// validate_rule

ValidationReport validate_rule(const SubstitutionRule& rule) {
  ValidationReport report;
  report.ok = true;
  const double invXi = 1.0 / rule.xi();
  const double tol = 1e-9;
  for (int j = 1; j <= rule.tile_count(); ++j) {
    const BasicTile& parent = rule.tile(j);
    TileValidation tv;
    tv.tileId = j;

    // Net extraction places one point at each tile centroid, so the
    // centroid must be interior.
    if (!strictly_inside(parent.centroid, parent.polygon, tol))
      fail(ErrorCode::MalformedPolygon,
           "tile " + std::to_string(j) + " centroid is not interior");

    std::vector<std::vector<Vec2>> childPolys;
    double childArea = 0.0;
    for (const auto& c : rule.children_of(j)) {
      const BasicTile& base = rule.tile(c.tileId);
      std::vector<Vec2> poly;
      poly.reserve(base.polygon.size());
      for (Vec2 v : base.polygon) poly.push_back(rule.apply(c.iso, v * invXi));
      childArea += base.area * invXi * invXi;
      for (Vec2 v : poly) {
        bool inside = point_in_polygon(v, parent.polygon);
        double d = distance_to_boundary(v, parent.polygon);
        if (!inside && d > tol)
          fail(ErrorCode::ChildOutsideParent,
               "tile " + std::to_string(j) + ": child vertex escapes parent by " +
                   std::to_string(d));
      }
      childPolys.push_back(std::move(poly));
    }

    tv.areaResidualAbs = std::abs(childArea - parent.area);
    tv.areaResidualRel = tv.areaResidualAbs / parent.area;
    if (tv.areaResidualRel >= 1e-8) report.ok = false;

    // Interior-disjointness spot checks: centroid and centroid-to-vertex
    // midpoints of each child must not fall strictly inside a sibling.
    for (std::size_t a = 0; a < childPolys.size(); ++a) {
      Vec2 c = polygon_centroid(childPolys[a]);
      std::vector<Vec2> samples = {c};
      for (Vec2 v : childPolys[a]) samples.push_back((c + v) * 0.5);
      // Samples must also sit inside the parent.
      for (Vec2 p : samples) {
        bool inside = point_in_polygon(p, parent.polygon);
        double d = distance_to_boundary(p, parent.polygon);
        if (!inside && d > tol) {
          ++tv.overlapFindings;
          report.ok = false;
        }
      }
      for (std::size_t b = 0; b < childPolys.size(); ++b) {
        if (a == b) continue;
        for (Vec2 p : samples) {
          if (strictly_inside(p, childPolys[b], tol)) {
            ++tv.overlapFindings;
            report.ok = false;
          }
        }
      }
    }
    report.perTile.push_back(tv);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Generation

std::vector<std::int64_t> refinement_counts(const SubstitutionRule& rule,
                                            int rootType, int m) {
  if (rootType < 1 || rootType > rule.tile_count())
    fail(ErrorCode::InvalidArgument, "rootType out of range");
  if (m < 0) fail(ErrorCode::InvalidArgument, "level must be >= 0");
  std::vector<std::int64_t> v(rule.tile_count(), 0);
  v[rootType - 1] = 1;
  for (int step = 0; step < m; ++step) {
    std::vector<std::int64_t> next(rule.tile_count(), 0);
    for (int j = 0; j < rule.tile_count(); ++j) {
      if (v[j] == 0) continue;
      for (const auto& c : rule.children_of(j + 1)) {
        if (__builtin_add_overflow(next[c.tileId - 1], v[j],
                                   &next[c.tileId - 1]))
          fail(ErrorCode::CapacityExceeded, "tile count overflows 64 bits");
      }
    }
    v = std::move(next);
  }
  return v;
}

namespace {
std::int64_t total_count(const std::vector<std::int64_t>& v) {
  std::int64_t t = 0;
  for (auto x : v) {
    if (__builtin_add_overflow(t, x, &t))
      fail(ErrorCode::CapacityExceeded, "tile count overflows 64 bits");
  }
  return t;
}

struct Generator {
  const SubstitutionRule& rule;
  std::vector<PlacedTile>& out;
  std::vector<double> xiPow;
  int bits;

  void expand(const PlacedTile& t, int depth) {
    if (t.level == 0) {
      out.push_back(t);
      return;
    }
    const auto& kids = rule.children_of(t.tileId);
    Isometry parentIso = t.placement();
    double s = xiPow[t.level];
    for (std::size_t c = 0; c < kids.size(); ++c) {
      const ChildPlacement& cp = kids[c];
      Isometry scaled{cp.iso.rot, cp.iso.reflect, cp.iso.t * s};
      Isometry childIso = rule.compose(parentIso, scaled);
      PlacedTile child;
      child.tx = childIso.t.x;
      child.ty = childIso.t.y;
      child.tileId = static_cast<std::int16_t>(cp.tileId);
      child.level = static_cast<std::int16_t>(t.level - 1);
      child.rot = static_cast<std::uint8_t>(childIso.rot);
      child.reflect = childIso.reflect ? 1 : 0;
      child.address =
          t.address | (static_cast<std::uint64_t>(c) << (bits * depth));
      expand(child, depth + 1);
    }
  }
};
}  // namespace

Patch supertile(const RulePtr& rule, int rootType, int level,
                std::int64_t capacity) {
  if (!rule) fail(ErrorCode::InvalidArgument, "null rule");
  if (level < 0) fail(ErrorCode::InvalidArgument, "level must be >= 0");
  std::int64_t projected = total_count(refinement_counts(*rule, rootType, level));
  if (projected > capacity)
    fail(ErrorCode::CapacityExceeded,
         "supertile would contain " + std::to_string(projected) + " tiles");
  if (level * rule->address_bits() > 64)
    fail(ErrorCode::CapacityExceeded, "address space exhausted at this level");

  Patch patch;
  patch.rule = rule;
  patch.rootType = rootType;
  patch.rootLevel = level;
  patch.tiles.reserve(static_cast<std::size_t>(projected));

  Generator gen{*rule, patch.tiles, {}, rule->address_bits()};
  gen.xiPow.resize(level + 1);
  gen.xiPow[0] = 1.0;
  for (int i = 1; i <= level; ++i) gen.xiPow[i] = gen.xiPow[i - 1] * rule->xi();

  PlacedTile root;
  root.tileId = static_cast<std::int16_t>(rootType);
  root.level = static_cast<std::int16_t>(level);
  gen.expand(root, 0);
  return patch;
}

Patch inflate(const Patch& patch, int steps, std::int64_t capacity) {
  if (!patch.rule) fail(ErrorCode::InvalidArgument, "patch has no rule");
  if (patch.tiles.empty()) fail(ErrorCode::EmptyPatch, "cannot inflate empty patch");
  if (steps < 0) fail(ErrorCode::InvalidArgument, "steps must be >= 0");
  const SubstitutionRule& rule = *patch.rule;

  // Exact projected size before doing any work.
  std::int64_t projected = 0;
  for (const auto& t : patch.tiles) {
    if (t.level < steps)
      fail(ErrorCode::InvalidArgument,
           "tile level below requested number of substitution steps");
    auto counts = refinement_counts(rule, t.tileId, steps);
    if (__builtin_add_overflow(projected, total_count(counts), &projected))
      fail(ErrorCode::CapacityExceeded, "tile count overflows 64 bits");
  }
  if (projected > capacity)
    fail(ErrorCode::CapacityExceeded,
         "inflation would produce " + std::to_string(projected) + " tiles");

  Patch out;
  out.rule = patch.rule;
  out.rootType = patch.rootType;
  out.rootLevel = patch.rootLevel;
  out.tiles.reserve(static_cast<std::size_t>(projected));

  int maxLevel = 0;
  for (const auto& t : patch.tiles) maxLevel = std::max(maxLevel, (int)t.level);
  if ((patch.rootLevel - 0) * rule.address_bits() > 64)
    fail(ErrorCode::CapacityExceeded, "address space exhausted at this level");

  std::vector<double> xiPow(maxLevel + 1);
  xiPow[0] = 1.0;
  for (int i = 1; i <= maxLevel; ++i) xiPow[i] = xiPow[i - 1] * rule.xi();

  struct Frame {
    PlacedTile tile;
    int remaining;
  };
  for (const auto& t : patch.tiles) {
    // Depth-first expansion of `steps` substitution rounds for this tile.
    std::vector<Frame> stack{{t, steps}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (f.remaining == 0) {
        out.tiles.push_back(f.tile);
        continue;
      }
      const auto& kids = rule.children_of(f.tile.tileId);
      Isometry parentIso = f.tile.placement();
      double s = xiPow[f.tile.level];
      int depth = patch.rootLevel - f.tile.level;
      for (std::size_t c = kids.size(); c-- > 0;) {
        const ChildPlacement& cp = kids[c];
        Isometry scaled{cp.iso.rot, cp.iso.reflect, cp.iso.t * s};
        Isometry childIso = rule.compose(parentIso, scaled);
        PlacedTile child;
        child.tx = childIso.t.x;
        child.ty = childIso.t.y;
        child.tileId = static_cast<std::int16_t>(cp.tileId);
        child.level = static_cast<std::int16_t>(f.tile.level - 1);
        child.rot = static_cast<std::uint8_t>(childIso.rot);
        child.reflect = childIso.reflect ? 1 : 0;
        child.address =
            f.tile.address |
            (static_cast<std::uint64_t>(c) << (rule.address_bits() * depth));
        stack.push_back({child, f.remaining - 1});
      }
    }
  }
  return out;
}

std::vector<std::int64_t> count_types(const Patch& patch) {
  if (!patch.rule) fail(ErrorCode::InvalidArgument, "patch has no rule");
  std::vector<std::int64_t> counts(patch.rule->tile_count(), 0);
  for (const auto& t : patch.tiles) ++counts[t.tileId - 1];
  return counts;
}

PlacedTile place_child(const SubstitutionRule& rule, const PlacedTile& parent,
                       int childIndex, int rootLevel) {
  if (parent.level < 1)
    fail(ErrorCode::InvalidArgument, "level-0 tiles have no children");
  const auto& kids = rule.children_of(parent.tileId);
  if (childIndex < 0 || childIndex >= static_cast<int>(kids.size()))
    fail(ErrorCode::InvalidArgument, "child index out of range");
  const ChildPlacement& cp = kids[childIndex];
  double s = std::pow(rule.xi(), parent.level);
  Isometry scaled{cp.iso.rot, cp.iso.reflect, cp.iso.t * s};
  Isometry childIso = rule.compose(parent.placement(), scaled);
  PlacedTile child;
  child.tx = childIso.t.x;
  child.ty = childIso.t.y;
  child.tileId = static_cast<std::int16_t>(cp.tileId);
  child.level = static_cast<std::int16_t>(parent.level - 1);
  child.rot = static_cast<std::uint8_t>(childIso.rot);
  child.reflect = childIso.reflect ? 1 : 0;
  int depth = rootLevel - parent.level;
  child.address = parent.address | (static_cast<std::uint64_t>(childIndex)
                                    << (rule.address_bits() * depth));
  return child;
}

Patch tiles_inside(const Patch& patch, const Window& w) {
  if (!patch.rule) fail(ErrorCode::InvalidArgument, "patch has no rule");
  Patch out;
  out.rule = patch.rule;
  out.rootType = patch.rootType;
  out.rootLevel = patch.rootLevel;
  const double tol = 1e-9;
  for (const auto& t : patch.tiles) {
    bool inside = true;
    for (Vec2 v : patch.polygon_of(t)) {
      if (!w.contains(v, tol)) {
        inside = false;
        break;
      }
    }
    if (inside) out.tiles.push_back(t);
  }
  return out;
}

Patch tiles_meeting(const Patch& patch, const Window& w) {
  if (!patch.rule) fail(ErrorCode::InvalidArgument, "patch has no rule");
  Patch out;
  out.rule = patch.rule;
  out.rootType = patch.rootType;
  out.rootLevel = patch.rootLevel;
  Vec2 lo = w.corner, hi = w.max_corner();
  for (const auto& t : patch.tiles) {
    std::vector<Vec2> poly = patch.polygon_of(t);
    Vec2 pLo = poly[0], pHi = poly[0];
    for (Vec2 v : poly) {
      pLo.x = std::min(pLo.x, v.x);
      pLo.y = std::min(pLo.y, v.y);
      pHi.x = std::max(pHi.x, v.x);
      pHi.y = std::max(pHi.y, v.y);
    }
    if (pHi.x < lo.x || pHi.y < lo.y || pLo.x > hi.x || pLo.y > hi.y) continue;
    if (polygon_intersects_box(poly, lo, hi)) out.tiles.push_back(t);
  }
  return out;
}

}  // namespace tilenet

