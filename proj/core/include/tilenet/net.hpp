#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilenet/geometry.hpp"
#include "tilenet/substitution.hpp"

namespace tilenet {

// Separated net of a master patch: the level-0 tile centroids, together with
// the square evaluation window (the bounding square of the patch support)
// and a bucket index for range queries.
struct NetWindow {
  std::vector<Vec2> points;
  std::vector<std::int32_t> tileIds;        // parallel to points
  std::vector<std::uint64_t> addresses;     // parallel to points
  Window window;
  double scale = 1.0;  // cumulative rescaling applied to patch coordinates
  RulePtr rule;        // provenance; null for imported point sets
  int rootType = 0;
  int rootLevel = 0;
  std::string source;

  // Delone parameters; negative until compute_delone has run.
  double r = -1.0;            // packing radius: half the minimum pair distance
  double R = -1.0;            // covering radius over the sampled interior
  double rSampleSpacing = 0;  // grid spacing used for the R estimate

  GridIndex index;

  std::size_t size() const { return points.size(); }
  // Rebuild the bucket index (bucket chosen from the mean point spacing).
  void finalize();
  // Copy with all lengths multiplied by c > 0.
  NetWindow scaled(double c) const;
};

// Centroids of all level-0 tiles.  The patch must be non-empty and fully
// refined (every tile at level 0).
NetWindow extract_net(const Patch& patch);

// Axis-aligned unit-lattice control net: cell centers (i+1/2, j+1/2) for
// 0 <= i < w, 0 <= j < h, window anchored at the origin.
NetWindow unit_lattice_net(int w, int h);

struct DeloneParams {
  double r = 0.0;
  double R = 0.0;
  double sampleSpacing = 0.0;
};

// Computes r exactly (nearest-neighbour scan) and R by grid sampling at
// spacing r/2 over the interior of the support, eroded by one level-0 tile
// diameter so every sample is genuinely covered.  Stores the results on the
// net and returns them.  Throws TooFewPoints for nets with fewer than 2
// points.
DeloneParams compute_delone(NetWindow& net, int maxGrid = 8192);

// The root tile polygon scaled to `rootLevel` (patch coordinates).
std::vector<Vec2> support_root_polygon(const SubstitutionRule& rule,
                                       int rootType, int rootLevel);

// Support polygon of the net: the placed root tile when provenance is
// available, otherwise the window square.
std::vector<Vec2> support_polygon(const NetWindow& net);

// Largest axis-aligned square inside the support, eroded by `margin`.
Window safe_window(const NetWindow& net, double margin);

}  // namespace tilenet
