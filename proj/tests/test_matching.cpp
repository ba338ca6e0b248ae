#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "tilenet/matching.hpp"
#include "tilenet/rng.hpp"
#include "tilenet/substitution.hpp"

using namespace tilenet;

namespace {

// Exhaustive bottleneck optimum: min over all injections of the smaller
// side into the larger side of the max pair distance.
double brute_bottleneck(const std::vector<Vec2>& a,
                        const std::vector<Vec2>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  std::vector<int> idx(large.size());
  std::iota(idx.begin(), idx.end(), 0);
  double best = 1e300;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < small.size(); ++i)
      worst = std::max(worst, dist(small[i], large[idx[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

std::vector<Vec2> random_cloud(Rng& rng, int n, double extent) {
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back({rng.next_double() * extent, rng.next_double() * extent});
  return pts;
}

}  // namespace

TEST_CASE("lattice point enumeration") {
  // The lattice is anchored at the window corner: corner + beta*(i, j).
  // beta = 1 on [0,2]^2: the 3x3 grid.
  CHECK(lattice_points(1.0, Window{{0, 0}, 2.0}).size() == 9);
  // beta = 0.5 on [0,1]^2.
  CHECK(lattice_points(0.5, Window{{0, 0}, 1.0}).size() == 9);
  // Anchoring: a shifted window keeps its 3x3 grid, starting at the corner.
  auto shifted = lattice_points(1.0, Window{{0.5, 0.5}, 2.0});
  CHECK(shifted.size() == 9);
  CHECK(shifted[0].x == doctest::Approx(0.5));
  // Phase moves the points off the corners.
  auto pts = lattice_points(1.0, Window{{0, 0}, 2.0}, {0.25, 0.25});
  CHECK(pts.size() == 4);
  for (Vec2 p : pts) {
    CHECK(std::fabs(p.x - std::round(p.x)) == doctest::Approx(0.25));
  }
}

TEST_CASE("bottleneck on identical and shifted sets") {
  Rng rng(1);
  std::vector<Vec2> a = random_cloud(rng, 20, 10.0);
  MatchResult same = bottleneck_match(a, a);
  CHECK(same.bottleneck == doctest::Approx(0.0));
  CHECK(same.pairs.size() == 20);
  CHECK(same.unmatchedA == 0);
  CHECK(same.unmatchedB == 0);

  // Two isolated points shifted by v: the optimum is exactly |v|.
  std::vector<Vec2> p{{0, 0}, {100, 0}};
  std::vector<Vec2> q{{0.3, 0.4}, {100.3, 0.4}};
  MatchResult shifted = bottleneck_match(p, q);
  CHECK(shifted.bottleneck == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bottleneck equals brute force on seeded instances") {
  int instances = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(mix_seed(404, seed));
    int na = 2 + static_cast<int>(rng.next_below(6));  // 2..7
    int nb = na + static_cast<int>(rng.next_below(2));  // equal or +1
    std::vector<Vec2> a = random_cloud(rng, na, 6.0);
    std::vector<Vec2> b = random_cloud(rng, nb, 6.0);
    MatchResult m = bottleneck_match(a, b);
    double want = brute_bottleneck(a, b);
    CHECK(m.bottleneck == doctest::Approx(want).epsilon(1e-12));
    CHECK(m.pairs.size() == static_cast<std::size_t>(std::min(na, nb)));
    // The reported pairs realize the reported bottleneck.
    double worst = 0.0;
    for (auto [ia, ib] : m.pairs)
      worst = std::max(worst, dist(a[ia], b[ib]));
    CHECK(worst == doctest::Approx(m.bottleneck).epsilon(1e-12));
    ++instances;
  }
  CHECK(instances == 40);
}

TEST_CASE("unmatched points are counted and confined") {
  Rng rng(9);
  std::vector<Vec2> a = random_cloud(rng, 30, 8.0);
  std::vector<Vec2> b = random_cloud(rng, 22, 8.0);
  MatchResult m = bottleneck_match(a, b);
  CHECK(m.pairs.size() == 22);
  CHECK(m.unmatchedA == 8);
  CHECK(m.unmatchedB == 0);
  CHECK(static_cast<std::int64_t>(std::llabs(
            static_cast<long long>(a.size()) -
            static_cast<long long>(b.size()))) <=
        m.unmatchedA + m.unmatchedB);
}

TEST_CASE("cap failure throws") {
  std::vector<Vec2> a{{0, 0}};
  std::vector<Vec2> b{{50, 0}};
  CHECK_THROWS_AS((void)bottleneck_match(a, b, 1.0, 1.0), Error);
  try {
    (void)bottleneck_match(a, b, 1.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPerfectMatchingUnderCap);
  }
  // Adaptive cap doubles until it succeeds.
  MatchResult m = bottleneck_match(a, b, 0.0, 100.0);
  CHECK(m.bottleneck == doctest::Approx(50.0));
}

TEST_CASE("displacement profile runs and reports") {
  RulePtr rule = builtin_rule("chair");
  ProfileOptions opts;
  opts.phases = 1;
  ProfileReport rep = displacement_profile(rule, 1, {3, 4, 5}, std::sqrt(3.0),
                                           opts);
  REQUIRE(rep.entries.size() == 3);
  for (const auto& e : rep.entries) {
    CHECK(e.bottleneck > 0.0);
    CHECK(e.netPoints > 0);
    CHECK(e.latticePoints >= e.netPoints);
    CHECK(e.perPhase.size() == 1);
  }
  CHECK(rep.entries[2].windowEdge > rep.entries[0].windowEdge);
  CHECK(std::isfinite(rep.growthExponent));
  CHECK(rep.beta == doctest::Approx(std::sqrt(3.0)));

  // Median over phases: a 3-phase run reports the middle value.
  opts.phases = 3;
  opts.seed = 7;
  ProfileReport rep3 = displacement_profile(rule, 1, {4}, std::sqrt(3.0),
                                            opts);
  std::vector<double> ph = rep3.entries[0].perPhase;
  REQUIRE(ph.size() == 3);
  std::sort(ph.begin(), ph.end());
  CHECK(rep3.entries[0].bottleneck == doctest::Approx(ph[1]));
}
