#pragma once

#include <string>
#include <vector>

#include "tilenet/discrepancy.hpp"
#include "tilenet/matching.hpp"
#include "tilenet/net.hpp"
#include "tilenet/spectral.hpp"
#include "tilenet/substitution.hpp"

namespace tilenet {

// ---------------------------------------------------------------------------
// Structured-text reports.  All numbers print with %.12g, so identical inputs
// give byte-identical reports.

std::string matrix_text(const SubstMatrix& a);
std::string spectral_text(const SubstMatrix& a, const SpectralReport& r,
                          double xi);
std::string validation_text(const ValidationReport& r);
std::string xi_consistency_text(const XiConsistency& x);
std::string decay_text(const DecayProbe& p);
std::string bk_text(const BkReport& r);
std::string laczkovich_text(const LaczkovichReport& r);
std::string layers_text(const LayerDecomposition& d);
std::string profile_text(const ProfileReport& r);
std::string match_text(const MatchResult& m);

// CubeUnion as one integer pair per line.
std::string cube_union_text(const CubeUnion& u);

// ---------------------------------------------------------------------------
// CSV artifacts.  Coordinates print with %.17g so a round-trip through text
// is exact; every file starts with a '#'-commented provenance header plus a
// column-name row.

std::string patch_to_csv(const Patch& patch);
std::string net_to_csv(const NetWindow& net);
// Rebuilds a net from net_to_csv output: points, ids, addresses, window,
// scale and Delone parameters are restored; the rule is re-attached when the
// header names a built-in rule.  Throws SyntaxError on malformed input.
NetWindow net_from_csv(const std::string& text);
std::string match_to_csv(const std::vector<Vec2>& a,
                         const std::vector<Vec2>& b, const MatchResult& m);
std::string bk_to_csv(const BkReport& r);
std::string laczkovich_to_csv(const LaczkovichReport& r);
std::string layers_to_csv(const LayerDecomposition& d);
std::string profile_to_csv(const ProfileReport& r);

// ---------------------------------------------------------------------------
// SVG rendering: deterministic documents (%.6f coordinates, fixed palette by
// tile type) — byte-identical for identical inputs and options.

struct SvgOptions {
  double targetWidth = 800.0;  // document width in px; height follows aspect
  double pointRadius = 2.0;    // net point radius in px
  bool drawWindow = true;      // outline the evaluation window, when known
};

std::string render_svg(const Patch& patch, const SvgOptions& opts = {});
std::string render_svg(const NetWindow& net, const SvgOptions& opts = {});
std::string render_svg(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                       const MatchResult& m, const SvgOptions& opts = {});

// ---------------------------------------------------------------------------
// Small file helpers (throw IoError on failure).

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace tilenet
