#include "tilenet/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tilenet/rng.hpp"

namespace tilenet {

std::vector<Vec2> lattice_points(double beta, const Window& w, Vec2 phase) {
  if (!(beta > 0)) fail(ErrorCode::InvalidArgument, "beta must be positive");
  if (!(w.edge > 0)) fail(ErrorCode::EmptyWindow, "window has no area");
  const double tol = 1e-9;
  auto lo = [&](double ph) {
    return static_cast<std::int64_t>(std::ceil(-tol / beta - ph));
  };
  auto hi = [&](double ph) {
    return static_cast<std::int64_t>(std::floor((w.edge + tol) / beta - ph));
  };
  std::vector<Vec2> out;
  for (std::int64_t i = lo(phase.x); i <= hi(phase.x); ++i)
    for (std::int64_t j = lo(phase.y); j <= hi(phase.y); ++j)
      out.push_back({w.corner.x + beta * (i + phase.x),
                     w.corner.y + beta * (j + phase.y)});
  return out;
}

namespace {

// Sparse bipartite graph: per-small-node adjacency sorted by distance, so a
// distance threshold is a prefix of each row.
struct BottleneckGraph {
  int nSmall = 0;
  int nLarge = 0;
  std::vector<std::size_t> rowStart;  // nSmall + 1
  std::vector<std::int32_t> adj;      // large-side indices
  std::vector<double> dist;

  std::vector<std::size_t> rowEnd;  // prefix end for the current threshold
  std::vector<int> pairSmall, pairLarge, layer, cursor;

  void set_threshold(double d) {
    rowEnd.resize(nSmall);
    for (int u = 0; u < nSmall; ++u) {
      const double* lo = dist.data() + rowStart[u];
      const double* hi = dist.data() + rowStart[u + 1];
      rowEnd[u] = rowStart[u] + (std::upper_bound(lo, hi, d) - lo);
    }
  }

  bool bfs() {
    std::vector<int> queue;
    layer.assign(nSmall, -1);
    for (int u = 0; u < nSmall; ++u)
      if (pairSmall[u] < 0) {
        layer[u] = 0;
        queue.push_back(u);
      }
    bool reachedFree = false;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      for (std::size_t e = rowStart[u]; e < rowEnd[u]; ++e) {
        int w = pairLarge[adj[e]];
        if (w < 0)
          reachedFree = true;
        else if (layer[w] < 0) {
          layer[w] = layer[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return reachedFree;
  }

  bool dfs(int u) {
    for (; cursor[u] < static_cast<int>(rowEnd[u] - rowStart[u]); ++cursor[u]) {
      std::size_t e = rowStart[u] + cursor[u];
      int v = adj[e];
      int w = pairLarge[v];
      if (w < 0 || (layer[w] == layer[u] + 1 && dfs(w))) {
        pairSmall[u] = v;
        pairLarge[v] = u;
        return true;
      }
    }
    layer[u] = -1;
    return false;
  }

  // Hopcroft-Karp; returns the maximum matching size under the threshold.
  int max_matching() {
    pairSmall.assign(nSmall, -1);
    pairLarge.assign(nLarge, -1);
    int matched = 0;
    while (bfs()) {
      cursor.assign(nSmall, 0);
      for (int u = 0; u < nSmall; ++u)
        if (pairSmall[u] < 0 && dfs(u)) ++matched;
    }
    return matched;
  }
};

}  // namespace

MatchResult bottleneck_match(const std::vector<Vec2>& a,
                             const std::vector<Vec2>& b, double cap,
                             double capLimit) {
  MatchResult out;
  if (a.empty() || b.empty()) {
    out.unmatchedA = static_cast<std::int64_t>(a.size());
    out.unmatchedB = static_cast<std::int64_t>(b.size());
    return out;
  }
  const bool swapped = a.size() > b.size();
  const std::vector<Vec2>& small = swapped ? b : a;
  const std::vector<Vec2>& large = swapped ? a : b;

  // Joint bounding box: caps default from it, and any full matching of the
  // smaller side is feasible within its diagonal.
  Vec2 lo = small[0], hi = small[0];
  for (const auto* set : {&small, &large})
    for (Vec2 p : *set) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
  double diag = std::hypot(hi.x - lo.x, hi.y - lo.y);
  if (capLimit <= 0) capLimit = diag + 1.0;

  // Bucket size from the mean spacing; the diagonal term keeps it sane for
  // degenerate (collinear or near-collinear) bounding boxes.
  double meanSpacing = std::max(
      {1e-12,
       std::sqrt((hi.x - lo.x + 1e-12) * (hi.y - lo.y + 1e-12) /
                 static_cast<double>(large.size())),
       diag / static_cast<double>(large.size() + 1)});
  GridIndex index(large, meanSpacing);

  // Lower bound: every small point must reach at least its nearest large
  // point, so the bottleneck is >= the max nearest-neighbour distance.
  double dLow = 0.0;
  for (Vec2 p : small) {
    double d;
    if (index.nearest(p, 0.0, &d) < 0)
      fail(ErrorCode::TooFewPoints, "no candidate partners");
    dLow = std::max(dLow, d);
  }

  double radius = cap > 0 ? cap : std::max(2.0 * dLow, meanSpacing);
  radius = std::min(std::max(radius, dLow), capLimit);

  BottleneckGraph g;
  g.nSmall = static_cast<int>(small.size());
  g.nLarge = static_cast<int>(large.size());
  for (;;) {
    g.rowStart.assign(g.nSmall + 1, 0);
    g.adj.clear();
    g.dist.clear();
    std::vector<std::pair<double, std::int32_t>> row;
    for (int u = 0; u < g.nSmall; ++u) {
      row.clear();
      index.for_each_in_disk(small[u], radius, [&](std::uint32_t v) {
        row.emplace_back(dist(small[u], large[v]), static_cast<std::int32_t>(v));
      });
      std::sort(row.begin(), row.end());
      for (const auto& [d, v] : row) {
        g.adj.push_back(v);
        g.dist.push_back(d);
      }
      g.rowStart[u + 1] = g.adj.size();
    }
    g.set_threshold(radius);
    if (g.max_matching() == g.nSmall) break;
    if (radius >= capLimit)
      fail(ErrorCode::NoPerfectMatchingUnderCap,
           "no full matching of the smaller side within displacement cap " +
               std::to_string(radius));
    radius = std::min(radius * 2, capLimit);
  }

  // The optimum is one of the candidate distances <= radius.
  std::vector<double> cands = g.dist;
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::size_t loIdx =
      std::lower_bound(cands.begin(), cands.end(), dLow) - cands.begin();
  std::size_t hiIdx =
      std::upper_bound(cands.begin(), cands.end(), radius) - cands.begin() - 1;
  while (loIdx < hiIdx) {
    std::size_t mid = loIdx + (hiIdx - loIdx) / 2;
    g.set_threshold(cands[mid]);
    if (g.max_matching() == g.nSmall)
      hiIdx = mid;
    else
      loIdx = mid + 1;
  }
  g.set_threshold(cands[hiIdx]);
  if (g.max_matching() != g.nSmall)
    fail(ErrorCode::NoPerfectMatchingUnderCap, "bottleneck search failed");

  out.capUsed = radius;
  out.bottleneck = 0.0;
  for (int u = 0; u < g.nSmall; ++u) {
    int v = g.pairSmall[u];
    out.bottleneck = std::max(out.bottleneck, dist(small[u], large[v]));
    if (swapped)
      out.pairs.emplace_back(v, u);
    else
      out.pairs.emplace_back(u, v);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  out.unmatchedA = swapped ? static_cast<std::int64_t>(large.size()) - g.nSmall : 0;
  out.unmatchedB = swapped ? 0 : static_cast<std::int64_t>(large.size()) - g.nSmall;
  return out;
}

ProfileReport displacement_profile(const RulePtr& rule, int rootType,
                                   const std::vector<int>& levels, double beta,
                                   const ProfileOptions& opts) {
  if (!rule) fail(ErrorCode::InvalidArgument, "null rule");
  if (levels.empty()) fail(ErrorCode::InvalidArgument, "no levels given");
  if (!(beta > 0)) fail(ErrorCode::InvalidArgument, "beta must be positive");
  ProfileReport report;
  report.beta = beta;

  for (int level : levels) {
    Patch patch = supertile(rule, rootType, level);
    NetWindow net = extract_net(patch);
    // Any window inside the support sees the exact centroid set, so no
    // erosion is required for honest counts; opts.margin lets callers
    // shrink it anyway.
    Window w = safe_window(net, opts.margin);
    const double tol = 1e-9;
    std::vector<Vec2> netPts;
    for (std::uint32_t i : net.index.query_box(
             {w.corner.x - tol, w.corner.y - tol},
             {w.corner.x + w.edge + tol, w.corner.y + w.edge + tol}))
      netPts.push_back(net.points[i]);
    if (netPts.size() < 2)
      fail(ErrorCode::WindowTooSmall,
           "level " + std::to_string(level) + " safe window holds " +
               std::to_string(netPts.size()) + " net points");

    Window dilated{{w.corner.x - opts.dilate * w.edge,
                    w.corner.y - opts.dilate * w.edge},
                   w.edge * (1 + 2 * opts.dilate)};
    double capLimit = opts.dilate * w.edge + 2 * beta;

    ProfileEntry entry;
    entry.level = level;
    entry.windowEdge = w.edge;
    entry.netPoints = static_cast<std::int64_t>(netPts.size());
    for (int k = 0; k < std::max(1, opts.phases); ++k) {
      Vec2 phase{0.0, 0.0};
      if (k > 0) {
        Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(k)));
        phase = {rng.next_double(), rng.next_double()};
      }
      std::vector<Vec2> lattice = lattice_points(beta, dilated, phase);
      entry.latticePoints = static_cast<std::int64_t>(lattice.size());
      if (lattice.size() < netPts.size())
        fail(ErrorCode::InvalidArgument,
             "dilated window holds fewer lattice points than net points; "
             "increase the dilation");
      MatchResult mr = bottleneck_match(netPts, lattice, opts.cap, capLimit);
      if (mr.unmatchedA != 0)
        fail(ErrorCode::NoPerfectMatchingUnderCap,
             "net side not fully matched");
      entry.perPhase.push_back(mr.bottleneck);
    }
    std::vector<double> sorted = entry.perPhase;
    std::sort(sorted.begin(), sorted.end());
    entry.bottleneck = sorted[(sorted.size() - 1) / 2];
    report.entries.push_back(std::move(entry));
  }

  std::vector<double> xs, ys;
  for (const auto& e : report.entries)
    if (e.bottleneck > 1e-12) {
      xs.push_back(std::log(e.windowEdge));
      ys.push_back(std::log(e.bottleneck));
    }
  report.growthExponent = xs.size() >= 2 ? fit_slope(xs, ys) : 0.0;
  return report;
}

}  // namespace tilenet
