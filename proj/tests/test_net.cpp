#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tilenet/io.hpp"
#include "tilenet/net.hpp"
#include "tilenet/substitution.hpp"

using namespace tilenet;

TEST_CASE("extract_net yields one centroid per tile") {
  RulePtr rule = builtin_rule("penrose");
  Patch p = supertile(rule, 1, 4);
  NetWindow net = extract_net(p);
  REQUIRE(net.size() == p.tiles.size());
  REQUIRE(net.size() == 55);

  for (std::size_t i = 0; i < net.size(); ++i) {
    Vec2 want = p.centroid_of(p.tiles[i]);
    CHECK(net.points[i].x == doctest::Approx(want.x).epsilon(1e-12));
    CHECK(net.points[i].y == doctest::Approx(want.y).epsilon(1e-12));
    CHECK(net.tileIds[i] == p.tiles[i].tileId);
    CHECK(net.addresses[i] == p.tiles[i].address);
  }
  CHECK(net.rootType == 1);
  CHECK(net.rootLevel == 4);
  CHECK(net.rule == p.rule);

  // Window is the bounding square of the support.
  for (const auto& t : p.tiles)
    for (Vec2 v : p.polygon_of(t)) CHECK(net.window.contains(v, 1e-9));

  CHECK_THROWS_AS((void)extract_net(Patch{}), Error);
}

TEST_CASE("unit lattice control net") {
  NetWindow net = unit_lattice_net(10, 10);
  REQUIRE(net.size() == 100);
  CHECK(net.window.edge == doctest::Approx(10.0));
  CHECK(net.points[0].x == doctest::Approx(0.5));

  DeloneParams d = compute_delone(net);
  CHECK(d.r == doctest::Approx(0.5).epsilon(1e-9));
  // Covering radius of Z^2 is sqrt(2)/2; the grid sampler comes close
  // from below.
  CHECK(d.R <= std::sqrt(2.0) / 2 + 1e-9);
  CHECK(d.R >= 0.65);
  CHECK(net.r == d.r);
}

TEST_CASE("delone parameters of a penrose net") {
  RulePtr rule = builtin_rule("penrose");
  Patch p = supertile(rule, 1, 6);
  NetWindow net = extract_net(p);
  DeloneParams d = compute_delone(net);
  CHECK(d.r > 0.0);
  CHECK(d.R > d.r);
  // The covering radius cannot exceed the centroid radius bound.
  CHECK(d.R <= rule->max_centroid_radius() + 1e-9);

  // Separation: every pair is at least 2r apart (r is half the min gap).
  double minGap = 1e300;
  for (std::size_t i = 0; i < net.size(); ++i) {
    double best = -1.0;
    for (std::size_t j = 0; j < net.size(); ++j)
      if (i != j) {
        double g = dist(net.points[i], net.points[j]);
        if (best < 0 || g < best) best = g;
      }
    minGap = std::min(minGap, best);
  }
  CHECK(d.r == doctest::Approx(minGap / 2).epsilon(1e-12));
}

TEST_CASE("scaling is equivariant") {
  RulePtr rule = builtin_rule("chair");
  NetWindow net = extract_net(supertile(rule, 1, 3));
  compute_delone(net);
  NetWindow big = net.scaled(2.5);
  CHECK(big.size() == net.size());
  CHECK(big.window.edge == doctest::Approx(2.5 * net.window.edge));
  CHECK(big.r == doctest::Approx(2.5 * net.r).epsilon(1e-12));
  CHECK(big.R == doctest::Approx(2.5 * net.R).epsilon(1e-12));
  CHECK(big.scale == doctest::Approx(2.5 * net.scale));
  CHECK(big.points[7].x == doctest::Approx(2.5 * net.points[7].x));
}

TEST_CASE("support polygon and safe window") {
  RulePtr rule = builtin_rule("penrose");
  NetWindow net = extract_net(supertile(rule, 1, 5));
  std::vector<Vec2> support = support_polygon(net);
  Patch p = supertile(rule, 1, 5);
  CHECK(std::fabs(polygon_area(support)) ==
        doctest::Approx(p.support_area()).epsilon(1e-9));

  Window safe = safe_window(net, 0.0);
  CHECK(safe.edge > 0.0);
  // All four corners lie in the support.
  for (Vec2 c : {safe.corner, safe.max_corner(),
                 Vec2{safe.corner.x, safe.corner.y + safe.edge},
                 Vec2{safe.corner.x + safe.edge, safe.corner.y}})
    CHECK(distance_to_boundary(c, support) > -1e-9);

  Window eroded = safe_window(net, 1.0);
  CHECK(eroded.edge == doctest::Approx(safe.edge - 2.0).epsilon(1e-6));
}

TEST_CASE("net csv round trip preserves everything") {
  RulePtr rule = builtin_rule("penrose");
  NetWindow net = extract_net(supertile(rule, 2, 5));
  compute_delone(net);
  net.source = "unit-test";

  std::string csv = net_to_csv(net);
  NetWindow back = net_from_csv(csv);

  REQUIRE(back.size() == net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    // %.17g serialization is lossless for doubles.
    CHECK(back.points[i].x == net.points[i].x);
    CHECK(back.points[i].y == net.points[i].y);
    CHECK(back.tileIds[i] == net.tileIds[i]);
    CHECK(back.addresses[i] == net.addresses[i]);
  }
  CHECK(back.window.corner.x == net.window.corner.x);
  CHECK(back.window.edge == net.window.edge);
  CHECK(back.scale == net.scale);
  CHECK(back.rootType == net.rootType);
  CHECK(back.rootLevel == net.rootLevel);
  CHECK(back.r == net.r);
  CHECK(back.R == net.R);

  // Known rule names are reattached on import.
  REQUIRE(back.rule != nullptr);
  CHECK(back.rule->name() == "penrose");

  // Serializing again is byte-identical.
  CHECK(net_to_csv(back) == csv);

  // Foreign rule names import as plain point sets.
  std::string foreign = csv;
  auto pos = foreign.find("# rule penrose");
  REQUIRE(pos != std::string::npos);
  foreign.replace(pos, 14, "# rule bespoke");
  NetWindow fb = net_from_csv(foreign);
  CHECK(fb.rule == nullptr);
  CHECK(fb.size() == net.size());
}

TEST_CASE("net csv import rejects malformed input") {
  CHECK_THROWS_AS((void)net_from_csv("x,y\n1,2\n"), Error);
  CHECK_THROWS_AS((void)net_from_csv("x,y,tileId,address\n1,zzz,1,0\n"), Error);
}
