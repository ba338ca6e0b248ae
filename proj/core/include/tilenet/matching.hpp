#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tilenet/geometry.hpp"
#include "tilenet/net.hpp"

namespace tilenet {

// All points of beta*Z^2 (optionally phase-shifted by beta*phase) inside the
// closed window, anchored at the window's lower-left corner: points are
// corner + beta*(i + phase.x, j + phase.y).
std::vector<Vec2> lattice_points(double beta, const Window& w,
                                 Vec2 phase = {0.0, 0.0});

struct MatchResult {
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;  // (a idx, b idx)
  double bottleneck = 0.0;
  std::int64_t unmatchedA = 0;
  std::int64_t unmatchedB = 0;
  double capUsed = 0.0;
};

// Optimal bottleneck matching that matches the smaller side fully: binary
// search over the sorted candidate pair distances (pairs within `cap`), with
// a Hopcroft-Karp feasibility test per candidate.  cap <= 0 starts from a
// small radius and doubles until feasible (up to capLimit).  Throws
// NoPerfectMatchingUnderCap when no full matching of the smaller side exists
// within the cap.
MatchResult bottleneck_match(const std::vector<Vec2>& a,
                             const std::vector<Vec2>& b, double cap = 0.0,
                             double capLimit = 0.0);

struct ProfileEntry {
  int level = 0;
  double windowEdge = 0.0;
  std::int64_t netPoints = 0;
  std::int64_t latticePoints = 0;
  double bottleneck = 0.0;  // median over phases
  std::vector<double> perPhase;
};

struct ProfileReport {
  double beta = 0.0;
  std::vector<ProfileEntry> entries;
  double growthExponent = 0.0;  // fitted slope of ln(bottleneck) vs ln(edge)
};

struct ProfileOptions {
  int phases = 1;        // lattice phase sweeps; median bottleneck reported
  double dilate = 0.6;   // lattice drawn from the window dilated by this
                         // fraction of the edge on every side
  double cap = 0.0;      // 0 = adaptive (doubling)
  double margin = 0.0;   // erosion of the inscribed window, net units; the
                         // window only has to stay inside the support
  std::uint64_t seed = 0;
};

// For each level: extract the net, restrict to the central window (the
// support's inscribed square, eroded by opts.margin), and match every net
// point into beta*Z^2 drawn from the dilated window — the finite
// realization of a map Y -> beta*Z^2.  Records the bottleneck and fits the
// growth exponent against the window edge.
ProfileReport displacement_profile(const RulePtr& rule, int rootType,
                                   const std::vector<int>& levels, double beta,
                                   const ProfileOptions& opts = {});

}  // namespace tilenet
