#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilenet/geometry.hpp"
#include "tilenet/net.hpp"
#include "tilenet/rng.hpp"
#include "tilenet/spectral.hpp"

namespace tilenet {

// Per-integer-cell point counts with a prefix-sum table, so any
// integer-cornered rectangle count is O(1).  Cells follow the half-open
// convention: a point belongs to cell (floor x, floor y).
class CellCounts {
 public:
  CellCounts() = default;
  explicit CellCounts(const NetWindow& net);

  std::int64_t count_rect(int x0, int y0, int x1, int y1) const;  // [x0,x1)x[y0,y1)
  std::int64_t count_cell(int ix, int iy) const {
    return count_rect(ix, iy, ix + 1, iy + 1);
  }
  std::int64_t count_square(int x0, int y0, int edge) const {
    return count_rect(x0, y0, x0 + edge, y0 + edge);
  }
  std::int64_t total() const;

 private:
  int x0_ = 0, y0_ = 0, w_ = 0, h_ = 0;
  std::vector<std::int64_t> prefix_;  // (w_+1) x (h_+1)
};

// Burago-Kleiner per-square ratio max(alpha mu(B)/#, #/(alpha mu(B))) for the
// half-open square B = [x0,x0+L) x [y0,y0+L).  When `safe` is given, B must
// lie inside it (tolerance 1e-9).
double e_alpha(const CellCounts& cells, int x0, int y0, int edge, double alpha,
               const Window* safe = nullptr);

struct SquareStat {
  int x0 = 0, y0 = 0, edge = 0;
  std::int64_t count = 0;
  double e = 0.0;
};

struct EAlphaStat {
  int j = 0;
  int edge = 0;
  std::int64_t positions = 0;  // admissible integer-corner positions
  std::int64_t sampled = 0;
  std::int64_t emptySquares = 0;  // excluded from the max, with a warning
  double maxE = 1.0;
  SquareStat worst;
};

struct SquareSampler {
  std::uint64_t seed = 0;
  std::int64_t cap = 100000;  // enumerate exhaustively up to this many
};

// Max of e_alpha over integer-cornered squares of edge 2^j inside `safe`;
// exhaustive when the position count is within sampler.cap, else a seeded
// uniform sample of cap positions.  A lower bound on the true sup.
EAlphaStat E_alpha(int j, const CellCounts& cells, const Window& safe,
                   double alpha, const SquareSampler& sampler);

struct BkReport {
  double alpha = 0.0;
  Window safe;
  std::vector<EAlphaStat> levels;        // j = jmin..jmax
  std::vector<double> productPartials;   // prod_{k<=j} E(2^k)
  double omegaFit = 0.0;                 // fitted decay rate of E(2^j) - 1
  std::int64_t emptySquareWarnings = 0;
};

// Scans E_alpha over j = jmin..jmax on the net's safe region (support
// eroded by one level-0 tile diameter).
BkReport bk_scan(const NetWindow& net, double alpha, int jmin, int jmax,
                 const SquareSampler& sampler);

// |#(Y cap U) - alpha mu2(U)| / mu1(boundary U); exact count, exact cell
// measure, exact perimeter.  U must lie inside `safe` when given.
double laczkovich_ratio(const CubeUnion& u, const NetWindow& net, double alpha,
                        const Window* safe = nullptr);

struct LaczkovichSample {
  int windowId = 0;
  std::int64_t cells = 0;
  double boundary = 0.0;
  double ratio = 0.0;
};

struct LaczkovichReport {
  double alpha = 0.0;
  double scale = 1.0;  // rescale factor applied to the net
  std::vector<LaczkovichSample> samples;
  double maxRatio = 0.0;
  double loglogSlope = 0.0;  // fitted slope of ln(ratio) vs ln(cells)
};

// Runs `windows` seeded polyomino windows with cell counts log-spaced in
// [minCells, maxCells] inside the net's safe region.  The net must already
// be rescaled so the minimum level-0 inradius is >= 1 (see
// rescale_for_unit_cells).
LaczkovichReport laczkovich_scan(const NetWindow& net, double alpha,
                                 int windows, int minCells, int maxCells,
                                 std::uint64_t seed);

// Rescaled copy of the net with min level-0 tile inradius exactly 1, plus
// the matching density: alphaScaled = alpha / factor^2.
NetWindow rescale_for_unit_cells(const NetWindow& net, double* factorOut,
                                 double* alphaScaledOut, double alpha);

// ---------------------------------------------------------------------------
// Layer decomposition (hierarchical partition of a cube union)

// Ancestry view of a master patch: every node is a level-l supertile placed
// inside the root, addressed by its child path.
struct Hierarchy {
  RulePtr rule;
  int rootType = 1;
  int rootLevel = 0;
  double scale = 1.0;  // same rescaling as the net the cube union refers to

  PlacedTile root() const;
  std::vector<PlacedTile> children_of(const PlacedTile& t) const;
  std::vector<Vec2> polygon_of(const PlacedTile& t) const;  // scaled coords
  double area_of(const PlacedTile& t) const;                // scaled coords
};

struct LayerStats {
  int level = 0;
  std::int64_t tileCount = 0;
  double measure = 0.0;      // sum of supp areas, scaled coordinates
  std::int64_t points = 0;   // #(V_l cap Y), combinatorial
  double discrepancy = 0.0;  // |points - alphaScaled * measure|
};

struct LayerDecomposition {
  std::vector<LayerStats> layers;  // ordered top level m down to N
  std::vector<std::vector<PlacedTile>> layerTiles;  // parallel to layers
  int topLevel = 0;     // m: highest level with an assigned tile (or N-1 if none)
  int bottomLevel = 0;  // N
  double windowMeasure = 0.0;      // mu2(U) = cell count
  double boundaryMeasure = 0.0;    // mu2(V_boundary), by subtraction
  std::int64_t windowPoints = 0;   // #(Y cap U)
  std::int64_t boundaryPoints = 0;  // by subtraction
  double partitionResidual = 0.0;  // |mu(U) - sum - boundary| (identically 0)
};

// Greedy top-down layer assignment: a level-l tile is assigned when every
// integer cell meeting its interior lies in U and no ancestor was assigned.
// Descends from the root to level N; the unassigned remainder is the
// boundary layer V_partial.
LayerDecomposition layer_decomposition(const CubeUnion& u,
                                       const Hierarchy& hierarchy, int levelN,
                                       const CellCounts& cells, double alpha);

// Independent Monte-Carlo estimate of the boundary-layer measure (the part
// of U not covered by assigned tiles), for cross-checking the subtraction
// value.  Returns (estimate, standardError).
std::pair<double, double> boundary_measure_mc(const CubeUnion& u,
                                              const Hierarchy& hierarchy,
                                              const LayerDecomposition& dec,
                                              int samplesPerCell,
                                              std::uint64_t seed);

// |#(T cap Y) - alpha mu2(T)| for a level-m supertile of the given type,
// computed combinatorially on the net's rule in extended precision (the
// alpha argument is cross-checked against the rule's own density).
double tile_discrepancy(int tileType, int m, const NetWindow& net,
                        double alpha);

// Seeded random polyomino window of `cells` cells grown inside `safe`
// (integer cells fully contained, at least one cell margin).
CubeUnion random_window(int cells, const Window& safe, Rng& rng);

}  // namespace tilenet
