#include "tilenet/net.hpp"

#include <algorithm>
#include <cmath>

namespace tilenet {

void NetWindow::finalize() {
  double meanSpacing =
      window.edge > 0 && !points.empty()
          ? std::sqrt(window.edge * window.edge / static_cast<double>(points.size()))
          : 1.0;
  index = GridIndex(points, std::max(1e-9, meanSpacing));
}

NetWindow NetWindow::scaled(double c) const {
  if (!(c > 0)) fail(ErrorCode::InvalidArgument, "scale factor must be > 0");
  NetWindow out = *this;
  for (auto& p : out.points) p = p * c;
  out.window.corner = window.corner * c;
  out.window.edge = window.edge * c;
  out.scale = scale * c;
  if (out.r >= 0) out.r *= c;
  if (out.R >= 0) out.R *= c;
  out.rSampleSpacing *= c;
  out.finalize();
  return out;
}

NetWindow extract_net(const Patch& patch) {
  if (!patch.rule) fail(ErrorCode::InvalidArgument, "patch has no rule");
  if (patch.tiles.empty()) fail(ErrorCode::EmptyPatch, "patch has no tiles");
  NetWindow net;
  net.rule = patch.rule;
  net.rootType = patch.rootType;
  net.rootLevel = patch.rootLevel;
  net.source = patch.rule->name() + ":" + std::to_string(patch.rootType) +
               ":L" + std::to_string(patch.rootLevel);
  net.points.reserve(patch.tiles.size());
  net.tileIds.reserve(patch.tiles.size());
  net.addresses.reserve(patch.tiles.size());
  for (const auto& t : patch.tiles) {
    if (t.level != 0)
      fail(ErrorCode::InvalidArgument,
           "net extraction requires a fully refined patch (all tiles level 0)");
    net.points.push_back(patch.centroid_of(t));
    net.tileIds.push_back(t.tileId);
    net.addresses.push_back(t.address);
  }

  // The support of a master patch is the placed root tile, so its bounding
  // box gives the window directly.
  std::vector<Vec2> root = support_root_polygon(*patch.rule, patch.rootType,
                                                patch.rootLevel);
  Vec2 lo = root[0], hi = root[0];
  for (Vec2 v : root) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  double edge = std::max(hi.x - lo.x, hi.y - lo.y);
  Vec2 c{(lo.x + hi.x) / 2, (lo.y + hi.y) / 2};
  net.window = {{c.x - edge / 2, c.y - edge / 2}, edge};
  net.finalize();
  return net;
}

NetWindow unit_lattice_net(int w, int h) {
  if (w < 1 || h < 1) fail(ErrorCode::InvalidArgument, "lattice dims must be >= 1");
  NetWindow net;
  net.source = "lattice:" + std::to_string(w) + "x" + std::to_string(h);
  net.points.reserve(static_cast<std::size_t>(w) * h);
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < h; ++j) {
      net.points.push_back({i + 0.5, j + 0.5});
      net.tileIds.push_back(1);
      net.addresses.push_back(0);
    }
  double edge = std::max(w, h);
  net.window = {{0.0, 0.0}, edge};
  net.finalize();
  return net;
}

std::vector<Vec2> support_root_polygon(const SubstitutionRule& rule,
                                       int rootType, int rootLevel) {
  const BasicTile& base = rule.tile(rootType);
  double s = std::pow(rule.xi(), rootLevel);
  std::vector<Vec2> out;
  out.reserve(base.polygon.size());
  for (Vec2 v : base.polygon) out.push_back(v * s);
  return out;
}

std::vector<Vec2> support_polygon(const NetWindow& net) {
  if (net.rule) {
    std::vector<Vec2> poly =
        support_root_polygon(*net.rule, net.rootType, net.rootLevel);
    for (auto& v : poly) v = v * net.scale;
    return poly;
  }
  Vec2 c0 = net.window.corner, c1 = net.window.max_corner();
  return {{c0.x, c0.y}, {c1.x, c0.y}, {c1.x, c1.y}, {c0.x, c1.y}};
}

Window safe_window(const NetWindow& net, double margin) {
  std::vector<Vec2> poly = support_polygon(net);
  Window inscribed = largest_inscribed_square(poly);
  Window safe = inscribed.eroded(margin);
  if (safe.edge <= 0)
    fail(ErrorCode::WindowTooSmall,
         "support too small for the requested safety margin");
  return safe;
}

DeloneParams compute_delone(NetWindow& net, int maxGrid) {
  if (net.points.size() < 2)
    fail(ErrorCode::TooFewPoints, "Delone parameters need at least 2 points");
  if (net.index.size() != net.points.size()) net.finalize();

  // Minimum pairwise distance.  Once a candidate minimum exists, each point
  // only needs a disk scan of that radius: a point with no neighbour inside
  // the current minimum cannot lower it.
  double minPair = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    if (minPair == std::numeric_limits<double>::max()) {
      double cap = net.index.bucket() * 2;
      while (cap <= net.window.edge * 4) {
        double best = std::numeric_limits<double>::max();
        net.index.for_each_in_disk(net.points[i], cap, [&](std::uint32_t j) {
          if (j == i) return;
          best = std::min(best, dist(net.points[j], net.points[i]));
        });
        if (best < std::numeric_limits<double>::max()) {
          minPair = best;
          break;
        }
        cap *= 2;
      }
    } else {
      net.index.for_each_in_disk(net.points[i], minPair, [&](std::uint32_t j) {
        if (j == i) return;
        minPair = std::min(minPair, dist(net.points[j], net.points[i]));
      });
    }
  }
  if (!(minPair < std::numeric_limits<double>::max()))
    fail(ErrorCode::TooFewPoints, "no distinct point pairs found");

  // Covering radius over the eroded interior.  One level-0 tile diameter
  // bounds the true covering radius, so eroding by it keeps every sample in
  // the genuinely covered region.
  double margin;
  if (net.rule)
    margin = net.rule->max_tile_diameter() * net.scale;
  else
    margin = 4.0 * std::sqrt(net.window.edge * net.window.edge /
                             static_cast<double>(net.points.size()));
  std::vector<Vec2> poly = support_polygon(net);
  Window inner = largest_inscribed_square(poly).eroded(margin);
  DeloneParams out;
  out.r = minPair / 2.0;
  if (inner.edge <= 0) {
    // Window too small to probe the interior; report R over the whole
    // window instead, which is still an upper bound on the covering radius.
    inner = net.window;
  }
  // Spacing r/2 per the Delone contract; maxGrid is a safety valve for very
  // large nets (the recorded spacing tells the caller which regime applied).
  double spacing = std::max(out.r / 2, inner.edge / maxGrid);
  int nx = std::max(1, static_cast<int>(std::floor(inner.edge / spacing)));
  double worst = 0.0;
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= nx; ++j) {
      Vec2 p{inner.corner.x + i * spacing, inner.corner.y + j * spacing};
      double d;
      if (net.index.nearest(p, 0.0, &d) >= 0) worst = std::max(worst, d);
    }
  out.R = worst;
  out.sampleSpacing = spacing;
  net.r = out.r;
  net.R = out.R;
  net.rSampleSpacing = spacing;
  return out;
}

}  // namespace tilenet
