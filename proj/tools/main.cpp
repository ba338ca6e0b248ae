#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tilenet/discrepancy.hpp"
#include "tilenet/io.hpp"
#include "tilenet/matching.hpp"
#include "tilenet/net.hpp"
#include "tilenet/rule_file.hpp"
#include "tilenet/spectral.hpp"
#include "tilenet/substitution.hpp"

namespace {

using namespace tilenet;

RulePtr load_rule(const std::string& source) {
  if (source == "penrose" || source == "chair") return builtin_rule(source);
  return parse_rule_file(source);
}

std::vector<int> parse_levels(const std::string& text) {
  auto dots = text.find("..");
  std::vector<int> levels;
  if (dots == std::string::npos) {
    levels.push_back(std::stoi(text));
    return levels;
  }
  int lo = std::stoi(text.substr(0, dots));
  int hi = std::stoi(text.substr(dots + 2));
  if (hi < lo)
    fail(ErrorCode::InvalidArgument, "empty level range '" + text + "'");
  for (int l = lo; l <= hi; ++l) levels.push_back(l);
  return levels;
}

void emit(const std::string& text) { std::fwrite(text.data(), 1, text.size(), stdout); }

// Shared pipeline: supertile -> net -> Delone -> rescale to unit inradius.
NetWindow unit_net(const RulePtr& rule, int rootType, int level,
                   double* alphaScaled) {
  SpectralReport rep = spectral_report(*rule);
  Patch patch = supertile(rule, rootType, level);
  NetWindow net = extract_net(patch);
  compute_delone(net);
  double factor = 0.0;
  return rescale_for_unit_cells(net, &factor, alphaScaled, rep.alpha);
}

struct CommonOpts {
  std::string rule = "penrose";
  int rootType = 1;
  int level = 10;
  std::uint64_t seed = 0;
  std::string out;
  std::string svg;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool withLevel = true) {
  cmd->add_option("--rule", o.rule, "built-in rule name (penrose|chair) or rule file path");
  cmd->add_option("--root-type", o.rootType, "root tile type (1-based)");
  if (withLevel) cmd->add_option("--level", o.level, "refinement level of the master patch");
  cmd->add_option("--seed", o.seed, "64-bit seed for all randomized estimates");
  cmd->add_option("--out", o.out, "write the CSV artifact to this path");
  cmd->add_option("--svg", o.svg, "write an SVG render to this path");
}

// Net for the discrepancy commands: generated from a rule, or imported from
// a previously exported CSV.  Imports with a known rule run through the same
// rescaling pipeline and reproduce the generated statistics exactly; foreign
// point sets need an explicit density and are used at their stored scale.
NetWindow load_net(const std::string& netCsv, const CommonOpts& o,
                   double alphaOverride, double* alphaScaled) {
  if (netCsv.empty()) {
    RulePtr rule = load_rule(o.rule);
    return unit_net(rule, o.rootType, o.level, alphaScaled);
  }
  NetWindow net = net_from_csv(read_file(netCsv));
  compute_delone(net);
  if (net.rule) {
    SpectralReport rep = spectral_report(*net.rule);
    double factor = 0.0;
    return rescale_for_unit_cells(net, &factor, alphaScaled, rep.alpha);
  }
  if (alphaOverride <= 0)
    fail(ErrorCode::InvalidArgument,
         "imported net has no known rule; pass --alpha (points per unit area)");
  *alphaScaled = alphaOverride;
  return net;
}

int run(int argc, char** argv) {
  CLI::App app{"substitution-tiling nets: generation, spectra, discrepancy, matching"};
  app.require_subcommand(1);

  // --- validate ---------------------------------------------------------
  CommonOpts vo;
  CLI::App* validate = app.add_subcommand("validate", "check a substitution rule's dissection");
  add_common(validate, vo, false);

  // --- generate ---------------------------------------------------------
  CommonOpts go;
  go.level = 4;
  CLI::App* generate = app.add_subcommand("generate", "generate a master patch and export it");
  add_common(generate, go);

  // --- analyze ----------------------------------------------------------
  CommonOpts ao;
  int aoMmax = 20;
  double aoEpsilon = -1.0;
  CLI::App* analyze = app.add_subcommand("analyze", "spectral analysis of the substitution matrix");
  add_common(analyze, ao, false);
  analyze->add_option("--mmax", aoMmax, "levels for the decay probe");
  analyze->add_option("--epsilon", aoEpsilon, "override epsilon (default (lambda1-|lambda2|)/10)");

  // --- discrepancy ------------------------------------------------------
  CLI::App* disc = app.add_subcommand("discrepancy", "counting discrepancy measurements");
  disc->require_subcommand(1);

  CommonOpts bko;
  int bkJmin = 1, bkJmax = 8;
  std::int64_t bkCap = 100000;
  std::string bkNetCsv;
  double bkAlpha = 0.0;
  CLI::App* bk = disc->add_subcommand("bk", "max square ratios E_alpha(2^j) and their product");
  add_common(bk, bko);
  bk->add_option("--jmin", bkJmin, "smallest dyadic exponent");
  bk->add_option("--jmax", bkJmax, "largest dyadic exponent");
  bk->add_option("--sample-cap", bkCap, "positions per j before sampling kicks in");
  bk->add_option("--net-csv", bkNetCsv, "scan an imported net instead of generating one");
  bk->add_option("--alpha", bkAlpha, "density of an imported net without rule provenance");

  CommonOpts lco;
  lco.level = 9;
  int lcWindows = 200, lcMin = 10, lcMax = 10000, lcLattice = 0;
  std::string lcNetCsv;
  double lcAlpha = 0.0;
  CLI::App* lacz = disc->add_subcommand("laczkovich", "boundary-normalized window discrepancy");
  add_common(lacz, lco);
  lacz->add_option("--windows", lcWindows, "number of polyomino windows");
  lacz->add_option("--min-cells", lcMin, "smallest window size (cells)");
  lacz->add_option("--max-cells", lcMax, "largest window size (cells)");
  lacz->add_option("--lattice", lcLattice,
                   "use a WxW unit-lattice control net instead of a rule");
  lacz->add_option("--net-csv", lcNetCsv, "scan an imported net instead of generating one");
  lacz->add_option("--alpha", lcAlpha, "density of an imported net without rule provenance");

  CommonOpts lyo;
  int lyCells = 20000, lyWindows = 3, lyBottom = 0, lyMc = 64;
  CLI::App* layers = disc->add_subcommand("layers", "hierarchical layer partition of windows");
  add_common(layers, lyo);
  layers->add_option("--cells", lyCells, "window size in cells");
  layers->add_option("--windows", lyWindows, "number of windows");
  layers->add_option("--bottom-level", lyBottom, "lowest assigned layer level N");
  layers->add_option("--mc-samples", lyMc, "per-cell samples for the boundary cross-check");

  CommonOpts tio;
  int tiMmax = 12;
  CLI::App* tile = disc->add_subcommand("tile", "supertile counting discrepancy series");
  add_common(tile, tio, false);
  tile->add_option("--mmax", tiMmax, "largest level of the series");

  // --- match ------------------------------------------------------------
  CommonOpts mo;
  std::string moLevels = "4..8";
  double moBeta = 0.0, moBetaScale = 1.0, moDilate = 0.6, moMargin = 0.0;
  int moPhases = 1;
  std::string moPairsOut;
  CLI::App* match = app.add_subcommand("match", "bottleneck displacement profile net vs lattice");
  add_common(match, mo, false);
  match->add_option("--levels", moLevels, "level range a..b (or a single level)");
  match->add_option("--beta", moBeta, "lattice spacing (default alpha^-1/2)");
  match->add_option("--beta-scale", moBetaScale, "multiply beta (wrong-scale control)");
  match->add_option("--phases", moPhases, "lattice phases; the median bottleneck is kept");
  match->add_option("--dilate", moDilate, "lattice window dilation per side (fraction of edge)");
  match->add_option("--margin", moMargin, "erosion of the inscribed net window");
  match->add_option("--pairs-out", moPairsOut,
                    "write the smallest level's matched pairs as CSV");

  // --- render -----------------------------------------------------------
  CommonOpts ro;
  ro.level = 4;
  bool roNet = false;
  CLI::App* render = app.add_subcommand("render", "SVG render of a patch or its net");
  add_common(render, ro);
  render->add_flag("--net", roNet, "render the extracted net instead of the tiles");

  CLI11_PARSE(app, argc, argv);

  if (*validate) {
    RulePtr rule = load_rule(vo.rule);
    ValidationReport vr = validate_rule(*rule);
    emit(validation_text(vr));
    if (!vr.ok) return static_cast<int>(ErrorCode::SemanticError);
    return 0;
  }

  if (*generate) {
    RulePtr rule = load_rule(go.rule);
    Patch patch = supertile(rule, go.rootType, go.level);
    std::printf("rule %s root-type %d level %d tiles %zu support-area %.12g\n",
                rule->name().c_str(), go.rootType, go.level, patch.tiles.size(),
                patch.support_area());
    if (!go.out.empty()) write_file(go.out, patch_to_csv(patch));
    if (!go.svg.empty()) write_file(go.svg, render_svg(patch));
    return 0;
  }

  if (*analyze) {
    RulePtr rule = load_rule(ao.rule);
    SubstMatrix a = substitution_matrix(*rule);
    SpectralReport rep = spectral_report(*rule, aoEpsilon);
    emit(spectral_text(a, rep, rule->xi()));
    emit(xi_consistency_text(check_xi_consistency(*rule, rep)));
    std::vector<double> u(static_cast<std::size_t>(a.size()), 0.0);
    u[0] = 1.0;
    emit(decay_text(decay_probe(a, u, aoMmax, rep)));
    std::vector<double> areas;
    for (const auto& t : rule->tiles()) areas.push_back(t.area);
    std::printf("patch-constant %.12g\n", fit_patch_constant(a, areas, rep));
    return 0;
  }

  if (*bk) {
    double alphaScaled = 0.0;
    NetWindow net = load_net(bkNetCsv, bko, bkAlpha, &alphaScaled);
    SquareSampler sampler{bko.seed, bkCap};
    BkReport report = bk_scan(net, alphaScaled, bkJmin, bkJmax, sampler);
    emit(bk_text(report));
    if (!bko.out.empty()) write_file(bko.out, bk_to_csv(report));
    return 0;
  }

  if (*lacz) {
    LaczkovichReport report;
    if (lcLattice > 0) {
      NetWindow net = unit_lattice_net(lcLattice, lcLattice);
      compute_delone(net);
      report = laczkovich_scan(net, 1.0, lcWindows, lcMin, lcMax, lco.seed);
    } else {
      double alphaScaled = 0.0;
      NetWindow net = load_net(lcNetCsv, lco, lcAlpha, &alphaScaled);
      report = laczkovich_scan(net, alphaScaled, lcWindows, lcMin, lcMax, lco.seed);
    }
    emit(laczkovich_text(report));
    if (!lco.out.empty()) write_file(lco.out, laczkovich_to_csv(report));
    return 0;
  }

  if (*layers) {
    RulePtr rule = load_rule(lyo.rule);
    double alphaScaled = 0.0;
    NetWindow net = unit_net(rule, lyo.rootType, lyo.level, &alphaScaled);
    Window safe = safe_window(net, 0.0);
    CellCounts cells(net);
    Hierarchy hierarchy{net.rule, net.rootType, net.rootLevel, net.scale};
    std::string csv;
    for (int w = 0; w < lyWindows; ++w) {
      Rng rng(mix_seed(lyo.seed, static_cast<std::uint64_t>(w)));
      CubeUnion u = random_window(lyCells, safe, rng);
      LayerDecomposition dec =
          layer_decomposition(u, hierarchy, lyBottom, cells, alphaScaled);
      std::printf("window %d\n", w);
      emit(layers_text(dec));
      auto [mc, se] = boundary_measure_mc(u, hierarchy, dec, lyMc,
                                          mix_seed(lyo.seed, 1000 + w));
      std::printf("boundary-mc %.12g stderr %.12g\n", mc, se);
      if (!lyo.out.empty()) csv += layers_to_csv(dec);
    }
    if (!lyo.out.empty()) write_file(lyo.out, csv);
    return 0;
  }

  if (*tile) {
    RulePtr rule = load_rule(tio.rule);
    SubstMatrix a = substitution_matrix(*rule);
    SpectralReport rep = spectral_report(*rule);
    std::vector<double> areas;
    for (const auto& t : rule->tiles()) areas.push_back(t.area);
    std::printf("tile-discrepancy root-type %d\n", tio.rootType);
    for (int m = 1; m <= tiMmax; ++m)
      std::printf("m %d discrepancy %.12g\n", m,
                  tile_discrepancy(a, areas, rep, tio.rootType, m));
    return 0;
  }

  if (*match) {
    RulePtr rule = load_rule(mo.rule);
    SpectralReport rep = spectral_report(*rule);
    double beta = moBeta > 0 ? moBeta : 1.0 / std::sqrt(rep.alpha);
    beta *= moBetaScale;
    ProfileOptions opts;
    opts.phases = moPhases;
    opts.dilate = moDilate;
    opts.margin = moMargin;
    opts.seed = mo.seed;
    ProfileReport report = displacement_profile(
        rule, mo.rootType, parse_levels(moLevels), beta, opts);
    emit(profile_text(report));
    if (!mo.out.empty()) write_file(mo.out, profile_to_csv(report));
    if ((!mo.svg.empty() || !moPairsOut.empty()) && !report.entries.empty()) {
      // Re-run the matching at the smallest level, where segments are
      // visible at document scale.
      int level = report.entries.front().level;
      Patch patch = supertile(rule, mo.rootType, level);
      NetWindow net = extract_net(patch);
      Window w = safe_window(net, opts.margin);
      const double tol = 1e-9;
      std::vector<Vec2> pts;
      for (std::uint32_t i : net.index.query_box(
               {w.corner.x - tol, w.corner.y - tol},
               {w.corner.x + w.edge + tol, w.corner.y + w.edge + tol}))
        pts.push_back(net.points[i]);
      Window dilated{{w.corner.x - opts.dilate * w.edge,
                      w.corner.y - opts.dilate * w.edge},
                     w.edge * (1 + 2 * opts.dilate)};
      std::vector<Vec2> lattice = lattice_points(beta, dilated);
      MatchResult mr =
          bottleneck_match(pts, lattice, 0.0, opts.dilate * w.edge + 2 * beta);
      if (!mo.svg.empty()) write_file(mo.svg, render_svg(pts, lattice, mr));
      if (!moPairsOut.empty()) write_file(moPairsOut, match_to_csv(pts, lattice, mr));
    }
    return 0;
  }

  if (*render) {
    if (ro.svg.empty() && ro.out.empty())
      fail(ErrorCode::InvalidArgument, "render needs an --svg or --out path");
    RulePtr rule = load_rule(ro.rule);
    Patch patch = supertile(rule, ro.rootType, ro.level);
    if (roNet) {
      NetWindow net = extract_net(patch);
      compute_delone(net);
      if (!ro.svg.empty()) write_file(ro.svg, render_svg(net));
      if (!ro.out.empty()) write_file(ro.out, net_to_csv(net));
    } else {
      if (!ro.svg.empty()) write_file(ro.svg, render_svg(patch));
      if (!ro.out.empty()) write_file(ro.out, patch_to_csv(patch));
    }
    if (!ro.svg.empty()) std::printf("wrote %s\n", ro.svg.c_str());
    if (!ro.out.empty()) std::printf("wrote %s\n", ro.out.c_str());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tilenet::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
