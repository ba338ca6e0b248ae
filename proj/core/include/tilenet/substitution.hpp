#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tilenet/geometry.hpp"

namespace tilenet {

// Direct isometry bookkeeping: rotation by rot*2*pi/q, optional reflection
// across the x axis (applied before the rotation), then translation.
struct Isometry {
  int rot = 0;
  bool reflect = false;
  Vec2 t{0.0, 0.0};
};

struct BasicTile {
  int id = 0;                  // 1-based
  std::vector<Vec2> polygon;   // simple, counter-clockwise
  double area = 0.0;           // cached |polygon_area|
  Vec2 centroid{0.0, 0.0};
};

struct ChildPlacement {
  int tileId = 0;   // 1-based id of the child's basic tile
  Isometry iso;     // places the xi^-1-scaled child inside the unit parent
};

class SubstitutionRule {
 public:
  SubstitutionRule(std::string name, int q, double xi,
                   std::vector<std::vector<Vec2>> polygons,
                   std::vector<std::vector<ChildPlacement>> children);

  const std::string& name() const { return name_; }
  int q() const { return q_; }
  double xi() const { return xi_; }
  int tile_count() const { return static_cast<int>(tiles_.size()); }
  const BasicTile& tile(int id) const { return tiles_.at(id - 1); }
  const std::vector<BasicTile>& tiles() const { return tiles_; }
  const std::vector<ChildPlacement>& children_of(int id) const {
    return children_.at(id - 1);
  }
  int max_children() const { return maxChildren_; }
  int address_bits() const { return addressBits_; }
  double max_tile_diameter() const { return maxTileDiameter_; }
  // Upper bound on the net covering radius: every point of a tile is within
  // this distance of the tile's centroid.
  double max_centroid_radius() const { return maxCentroidRadius_; }
  double min_inradius() const { return minInradius_; }
  double cos_of(int rot) const { return cosTable_[rot]; }
  double sin_of(int rot) const { return sinTable_[rot]; }

  Vec2 apply(const Isometry& iso, Vec2 p) const;
  // a then b is "b o a"; composition stays in the rot/reflect/translate form.
  Isometry compose(const Isometry& outer, const Isometry& inner) const;

  static SubstitutionRule penrose();
  static SubstitutionRule chair();

 private:
  std::string name_;
  int q_;
  double xi_;
  std::vector<BasicTile> tiles_;
  std::vector<std::vector<ChildPlacement>> children_;
  std::vector<double> cosTable_, sinTable_;
  int maxChildren_ = 0;
  int addressBits_ = 1;
  double maxTileDiameter_ = 0.0;
  double maxCentroidRadius_ = 0.0;
  double minInradius_ = 0.0;
};

using RulePtr = std::shared_ptr<const SubstitutionRule>;
RulePtr builtin_rule(const std::string& name);  // "penrose" | "chair"

// A tile of the hierarchical structure.  Its support is
// placement(xi^level * basic polygon); level 0 tiles are the final tiles.
struct PlacedTile {
  double tx = 0.0, ty = 0.0;  // placement translation
  std::uint64_t address = 0;  // child indices from the root, addressBits each
  std::int16_t tileId = 1;
  std::int16_t level = 0;
  std::uint8_t rot = 0;
  std::uint8_t reflect = 0;

  Isometry placement() const {
    return Isometry{rot, reflect != 0, {tx, ty}};
  }
};

struct Patch {
  RulePtr rule;
  int rootType = 1;
  int rootLevel = 0;
  std::vector<PlacedTile> tiles;

  std::vector<Vec2> polygon_of(const PlacedTile& t) const;
  Vec2 centroid_of(const PlacedTile& t) const;
  double area_of(const PlacedTile& t) const;
  double support_area() const;
  std::string address_string(const PlacedTile& t) const;
};

struct TileValidation {
  int tileId = 0;
  double areaResidualAbs = 0.0;  // |sum child areas - parent area|
  double areaResidualRel = 0.0;
  int overlapFindings = 0;  // sample points strictly inside a sibling
};

struct ValidationReport {
  bool ok = false;
  std::vector<TileValidation> perTile;
};

// Checks the dissection: child polygons stay inside the parent (vertex
// tolerance 1e-9), interiors of siblings are disjoint (centroid and
// centroid-to-vertex midpoint samples, tolerance 1e-9) and the rescaled
// child areas add up to the parent area (relative 1e-8).  Throws
// MalformedPolygon for broken polygons and ChildOutsideParent when a child
// vertex escapes its parent.
ValidationReport validate_rule(const SubstitutionRule& rule);

// Default cap on generated tiles; supertile/inflate reject larger requests
// up front via exact matrix counts.
inline constexpr std::int64_t kDefaultTileCapacity = 100'000'000;

// Master-supertile realization: all level-0 tiles of (xi H)^m applied to
// basic tile i, addresses recording the root-to-leaf child indices.
Patch supertile(const RulePtr& rule, int rootType, int level,
                std::int64_t capacity = kDefaultTileCapacity);

// One or more substitution steps applied to every tile of the patch.
Patch inflate(const Patch& patch, int steps,
              std::int64_t capacity = kDefaultTileCapacity);

// Tile counts by type (index 0 = tile id 1).
std::vector<std::int64_t> count_types(const Patch& patch);

// Exact type counts of the m-step refinement of one type-i tile, computed
// from the substitution matrix in integer arithmetic.
std::vector<std::int64_t> refinement_counts(const SubstitutionRule& rule,
                                            int rootType, int m);

// Child number `childIndex` of a placed tile, one level down, with the
// address digit appended at the depth implied by rootLevel.
PlacedTile place_child(const SubstitutionRule& rule, const PlacedTile& parent,
                       int childIndex, int rootLevel);

// Tiles whose every vertex lies in W (tolerance 1e-9).
Patch tiles_inside(const Patch& patch, const Window& w);
// Tiles whose support intersects W (bounding-box prefilter, then the exact
// polygon-rectangle test).
Patch tiles_meeting(const Patch& patch, const Window& w);

}  // namespace tilenet
