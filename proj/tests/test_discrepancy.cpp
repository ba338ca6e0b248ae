#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tilenet/discrepancy.hpp"
#include "tilenet/net.hpp"
#include "tilenet/rng.hpp"
#include "tilenet/spectral.hpp"
#include "tilenet/substitution.hpp"

using namespace tilenet;

namespace {

NetWindow penrose_unit_net(int level, double* alphaScaled) {
  RulePtr rule = builtin_rule("penrose");
  SpectralReport rep = spectral_report(*rule);
  NetWindow net = extract_net(supertile(rule, 1, level));
  compute_delone(net);
  double factor = 0.0;
  return rescale_for_unit_cells(net, &factor, alphaScaled, rep.alpha);
}

}  // namespace

TEST_CASE("cell counts agree with direct point counts") {
  double alphaScaled = 0.0;
  NetWindow net = penrose_unit_net(6, &alphaScaled);
  CellCounts cells(net);

  Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    int x0 = static_cast<int>(net.window.corner.x) +
             static_cast<int>(rng.next_below(40));
    int y0 = static_cast<int>(net.window.corner.y) +
             static_cast<int>(rng.next_below(40));
    int w = 1 + static_cast<int>(rng.next_below(12));
    int h = 1 + static_cast<int>(rng.next_below(12));
    std::int64_t want = 0;
    for (Vec2 p : net.points)
      if (p.x >= x0 && p.x < x0 + w && p.y >= y0 && p.y < y0 + h) ++want;
    CHECK(cells.count_rect(x0, y0, x0 + w, y0 + h) == want);
  }
  CHECK(cells.total() == static_cast<std::int64_t>(net.size()));
}

TEST_CASE("e_alpha on the unit lattice is exactly 1") {
  NetWindow net = unit_lattice_net(40, 40);
  compute_delone(net);
  CellCounts cells(net);
  // Any integer square holds exactly its area in points at density 1.
  for (int edge : {1, 2, 5, 16})
    CHECK(e_alpha(cells, 3, 7, edge, 1.0) == doctest::Approx(1.0));

  SquareSampler sampler{11, 100000};
  Window safe{{0.0, 0.0}, 40.0};
  EAlphaStat stat = E_alpha(3, cells, safe, 1.0, sampler);
  CHECK(stat.maxE == doctest::Approx(1.0));
  CHECK(stat.emptySquares == 0);

  BkReport bk = bk_scan(net, 1.0, 1, 4, sampler);
  for (const auto& lv : bk.levels) CHECK(lv.maxE == doctest::Approx(1.0));
  CHECK(bk.productPartials.back() == doctest::Approx(1.0));
}

TEST_CASE("laczkovich ratio closed forms") {
  NetWindow net = unit_lattice_net(30, 30);
  compute_delone(net);

  // Aligned windows on the unit lattice have zero discrepancy.
  CubeUnion square({{3, 3}, {3, 4}, {4, 3}, {4, 4}});
  CHECK(laczkovich_ratio(square, net, 1.0) == doctest::Approx(0.0));

  // A single empty cell at density alpha: |0 - alpha| / 4.
  RulePtr chair = builtin_rule("chair");
  Patch big = supertile(chair, 1, 5);  // edge 32 L-shape, cell-aligned
  NetWindow cnet = extract_net(big);
  cnet.finalize();
  // Pick a cell with no centroid: centroids of the chair net sit at
  // half-integer offsets 2/3 style positions; probe a few cells and use
  // one that is empty.
  CellCounts cells(cnet);
  bool found = false;
  for (int x = 2; x < 20 && !found; ++x)
    for (int y = 2; y < 20 && !found; ++y)
      if (cells.count_cell(x, y) == 0) {
        CubeUnion cell({{x, y}});
        double alpha = 1.0 / 3.0;
        CHECK(laczkovich_ratio(cell, cnet, alpha) ==
              doctest::Approx(alpha / 4.0));
        found = true;
      }
  CHECK(found);
}

TEST_CASE("rescale_for_unit_cells normalizes the inradius") {
  RulePtr rule = builtin_rule("penrose");
  SpectralReport rep = spectral_report(*rule);
  NetWindow net = extract_net(supertile(rule, 1, 5));
  compute_delone(net);
  double factor = 0.0, alphaScaled = 0.0;
  NetWindow scaled = rescale_for_unit_cells(net, &factor, &alphaScaled,
                                            rep.alpha);
  CHECK(factor == doctest::Approx(1.0 / rule->min_inradius()).epsilon(1e-9));
  CHECK(alphaScaled ==
        doctest::Approx(rep.alpha / (factor * factor)).epsilon(1e-12));
  CHECK(scaled.window.edge == doctest::Approx(net.window.edge * factor));
  // Frozen values for the built-in Penrose rule; the inradius comes from a
  // grid refinement accurate to ~1e-6, so the tolerance is relative 1e-4.
  CHECK(factor == doctest::Approx(3.80423).epsilon(1e-4));
  CHECK(alphaScaled == doctest::Approx(0.105146).epsilon(1e-4));
}

TEST_CASE("random windows are reproducible polyominoes inside safe") {
  double alphaScaled = 0.0;
  NetWindow net = penrose_unit_net(7, &alphaScaled);
  Window safe = safe_window(net, 0.0);
  Rng rng(77);
  CubeUnion u = random_window(500, safe, rng);
  CHECK(u.size() == 500);
  int x0, y0, x1, y1;
  u.bbox(&x0, &y0, &x1, &y1);
  CHECK(x0 >= safe.corner.x - 1e-9);
  CHECK(x1 + 1 <= safe.corner.x + safe.edge + 1e-9);
  CHECK(y0 >= safe.corner.y - 1e-9);
  CHECK(y1 + 1 <= safe.corner.y + safe.edge + 1e-9);

  Rng rng2(77);
  CubeUnion v = random_window(500, safe, rng2);
  CHECK(u.cells() == v.cells());
}

TEST_CASE("layer decomposition partitions the window") {
  double alphaScaled = 0.0;
  NetWindow net = penrose_unit_net(8, &alphaScaled);
  Window safe = safe_window(net, 0.0);
  CellCounts cells(net);
  Hierarchy hierarchy{net.rule, net.rootType, net.rootLevel, net.scale};

  Rng rng(5);
  CubeUnion u = random_window(900, safe, rng);
  LayerDecomposition dec = layer_decomposition(u, hierarchy, 0, cells,
                                               alphaScaled);

  // Exact partition: measures and counts both add up.
  double layerSum = 0.0;
  std::int64_t pointSum = 0;
  std::int64_t tileSum = 0;
  for (const auto& l : dec.layers) {
    layerSum += l.measure;
    pointSum += l.points;
    tileSum += l.tileCount;
    CHECK(l.discrepancy ==
          doctest::Approx(std::fabs(static_cast<double>(l.points) -
                                    alphaScaled * l.measure)));
  }
  CHECK(dec.partitionResidual <= 1e-9 * dec.windowMeasure);
  CHECK(layerSum + dec.boundaryMeasure ==
        doctest::Approx(dec.windowMeasure).epsilon(1e-12));
  CHECK(pointSum + dec.boundaryPoints == dec.windowPoints);
  CHECK(dec.windowMeasure == doctest::Approx(900.0));
  CHECK(tileSum > 0);

  // Assigned tiles are disjoint and inside U: their polygons' sampled
  // interiors lie in U.
  for (std::size_t li = 0; li < dec.layerTiles.size(); ++li) {
    for (const auto& t : dec.layerTiles[li]) {
      CHECK(t.level == dec.layers[li].level);
      Vec2 c = polygon_centroid(hierarchy.polygon_of(t));
      CHECK(u.contains_point(c));
    }
  }

  // Monte-Carlo cross-check of the boundary-layer measure.
  auto [mc, se] = boundary_measure_mc(u, hierarchy, dec, 32, 123);
  CHECK(std::fabs(mc - dec.boundaryMeasure) <= 6.0 * se + 1e-9);
}

TEST_CASE("hierarchy navigation") {
  double alphaScaled = 0.0;
  NetWindow net = penrose_unit_net(4, &alphaScaled);
  Hierarchy h{net.rule, net.rootType, net.rootLevel, net.scale};
  PlacedTile root = h.root();
  CHECK(root.level == 4);
  auto kids = h.children_of(root);
  REQUIRE(kids.size() == 3);
  // Level decreases, support areas scale down by xi^2.
  double parentArea = h.area_of(root);
  double kidArea = 0.0;
  for (const auto& k : kids) {
    CHECK(k.level == 3);
    kidArea += h.area_of(k);
  }
  CHECK(kidArea == doctest::Approx(parentArea).epsilon(1e-9));
}

TEST_CASE("net tile discrepancy agrees with the spectral series") {
  RulePtr rule = builtin_rule("penrose");
  SubstMatrix a = substitution_matrix(*rule);
  SpectralReport rep = spectral_report(*rule);
  std::vector<double> areas;
  for (const auto& t : rule->tiles()) areas.push_back(t.area);

  double alphaScaled = 0.0;
  NetWindow net = penrose_unit_net(6, &alphaScaled);
  for (int m = 1; m <= 6; ++m) {
    double combinatorial = tile_discrepancy(a, areas, rep, 1, m);
    double viaNet = tile_discrepancy(1, m, net, alphaScaled);
    // The net version reports in rescaled units: same counts, area scaled
    // by factor^2 cancels inside, so the two agree.
    CHECK(viaNet == doctest::Approx(combinatorial).epsilon(1e-9));
  }
}
