#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "tilenet/discrepancy.hpp"
#include "tilenet/matching.hpp"
#include "tilenet/net.hpp"
#include "tilenet/rng.hpp"
#include "tilenet/spectral.hpp"
#include "tilenet/substitution.hpp"

namespace {

using namespace tilenet;

const RulePtr& penrose_rule() {
  static RulePtr rule = builtin_rule("penrose");
  return rule;
}

// Patch fixtures keyed by level, built once so setup stays out of the loops.
const Patch& penrose_patch(int level) {
  static std::map<int, Patch> cache;
  auto it = cache.find(level);
  if (it == cache.end()) it = cache.emplace(level, supertile(penrose_rule(), 1, level)).first;
  return it->second;
}

struct UnitNet {
  NetWindow net;
  double alphaScaled = 0.0;
};

const UnitNet& penrose_unit_net(int level) {
  static std::map<int, UnitNet> cache;
  auto it = cache.find(level);
  if (it == cache.end()) {
    SpectralReport rep = spectral_report(*penrose_rule());
    NetWindow net = extract_net(penrose_patch(level));
    compute_delone(net);
    UnitNet u;
    double factor = 0.0;
    u.net = rescale_for_unit_cells(net, &factor, &u.alphaScaled, rep.alpha);
    it = cache.emplace(level, std::move(u)).first;
  }
  return it->second;
}

}  // namespace

static void BM_Supertile(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  std::int64_t tiles = 0;
  for (auto _ : state) {
    Patch patch = supertile(penrose_rule(), 1, level);
    tiles = static_cast<std::int64_t>(patch.tiles.size());
    benchmark::DoNotOptimize(patch.tiles.data());
  }
  state.SetItemsProcessed(state.iterations() * tiles);
}
BENCHMARK(BM_Supertile)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_ExtractNet(benchmark::State& state) {
  const Patch& patch = penrose_patch(static_cast<int>(state.range(0)));
  std::int64_t points = 0;
  for (auto _ : state) {
    NetWindow net = extract_net(patch);
    points = static_cast<std::int64_t>(net.points.size());
    benchmark::DoNotOptimize(net.points.data());
  }
  state.SetItemsProcessed(state.iterations() * points);
}
BENCHMARK(BM_ExtractNet)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_ComputeDelone(benchmark::State& state) {
  NetWindow net = extract_net(penrose_patch(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    DeloneParams params = compute_delone(net);
    benchmark::DoNotOptimize(params);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(net.points.size()));
}
BENCHMARK(BM_ComputeDelone)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_CellCounts(benchmark::State& state) {
  const UnitNet& u = penrose_unit_net(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    CellCounts cells(u.net);
    benchmark::DoNotOptimize(cells.total());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.net.points.size()));
}
BENCHMARK(BM_CellCounts)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_EAlpha(benchmark::State& state) {
  const UnitNet& u = penrose_unit_net(10);
  static CellCounts cells(u.net);
  const Window safe = safe_window(u.net, 0.0);
  const SquareSampler sampler{7, 100000};
  const int j = static_cast<int>(state.range(0));
  for (auto _ : state) {
    EAlphaStat stat = E_alpha(j, cells, safe, u.alphaScaled, sampler);
    benchmark::DoNotOptimize(stat.maxE);
  }
}
BENCHMARK(BM_EAlpha)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BottleneckMatch(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const double edge = std::sqrt(static_cast<double>(n));
  Rng rng(42);
  std::vector<Vec2> a, b;
  for (std::int64_t i = 0; i < n; ++i) {
    a.push_back({rng.next_double() * edge, rng.next_double() * edge});
    b.push_back({rng.next_double() * edge, rng.next_double() * edge});
  }
  for (auto _ : state) {
    MatchResult result = bottleneck_match(a, b, 0.0, 4.0 * edge);
    benchmark::DoNotOptimize(result.bottleneck);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_BottleneckMatch)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
