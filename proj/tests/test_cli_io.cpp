#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "tilenet/io.hpp"
#include "tilenet/matching.hpp"
#include "tilenet/net.hpp"
#include "tilenet/rule_file.hpp"
#include "tilenet/spectral.hpp"
#include "tilenet/substitution.hpp"

using namespace tilenet;

namespace {

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("expression evaluator") {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(eval_expression("(1+sqrt(5))/2") == phi);  // bit-exact path
  CHECK(eval_expression("2*3+4*5") == doctest::Approx(26.0));
  CHECK(eval_expression("2*(3+4)*5") == doctest::Approx(70.0));
  CHECK(eval_expression("-(2+3)/5") == doctest::Approx(-1.0));
  CHECK(eval_expression("sqrt(sqrt(16))") == doctest::Approx(2.0));
  CHECK(eval_expression("1-2-3") == doctest::Approx(-4.0));  // left assoc
  CHECK(eval_expression("8/4/2") == doctest::Approx(1.0));
  CHECK(eval_expression("0.5") == doctest::Approx(0.5));

  for (const char* bad : {"", "1+", "(1", "1/0", "sqrt(-1)", "2**3", "foo"}) {
    CHECK_THROWS_AS((void)eval_expression(bad), Error);
  }
  try {
    (void)eval_expression("1/0");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
  }
}

TEST_CASE("rule files reproduce the built-in rules exactly") {
  for (const char* name : {"penrose", "chair"}) {
    RulePtr builtin = builtin_rule(name);
    RulePtr parsed =
        parse_rule_file(std::string(TILENET_RULES_DIR) + "/" + name + ".rule");
    CHECK(parsed->name() == builtin->name());
    CHECK(parsed->q() == builtin->q());
    CHECK(parsed->xi() == builtin->xi());  // bit-identical expression value
    REQUIRE(parsed->tile_count() == builtin->tile_count());
    for (int id = 1; id <= builtin->tile_count(); ++id) {
      const auto& bp = builtin->tile(id).polygon;
      const auto& pp = parsed->tile(id).polygon;
      REQUIRE(pp.size() == bp.size());
      for (std::size_t v = 0; v < bp.size(); ++v) {
        CHECK(pp[v].x == bp[v].x);
        CHECK(pp[v].y == bp[v].y);
      }
      const auto& bc = builtin->children_of(id);
      const auto& pc = parsed->children_of(id);
      REQUIRE(pc.size() == bc.size());
      for (std::size_t c = 0; c < bc.size(); ++c) {
        CHECK(pc[c].tileId == bc[c].tileId);
        CHECK(pc[c].iso.rot == bc[c].iso.rot);
        CHECK(pc[c].iso.reflect == bc[c].iso.reflect);
        CHECK(pc[c].iso.t.x == bc[c].iso.t.x);
        CHECK(pc[c].iso.t.y == bc[c].iso.t.y);
      }
    }
    CHECK(substitution_matrix(*parsed) == substitution_matrix(*builtin));
  }
}

TEST_CASE("rule parser diagnostics carry source and line") {
  const char* missingQ = "name t\nxi 2\ntile 1\nvertex 0 0\nvertex 1 0\n"
                         "vertex 0 1\nchildren 1\nchild 1 rot 0 translate 0 0\n";
  CHECK_THROWS_AS((void)parse_rule_text(missingQ, "t.rule"), Error);

  const char* badChild =
      "name t\nq 4\nxi 2\ntile 1\nvertex 0 0\nvertex 2 0\nvertex 2 1\n"
      "vertex 1 1\nvertex 1 2\nvertex 0 2\nchildren 1\n"
      "child 1 rot 0 translate 0 0\nchild 1 rot 1 translate 2 0\n"
      "child 1 rot 3 translate 0 2\nchild 99 rot 0 translate 0.5 0.5\n";
  try {
    (void)parse_rule_text(badChild, "bad.rule");
    FAIL("expected SemanticError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SemanticError);
    CHECK(std::string(e.what()).find("bad.rule:15") != std::string::npos);
    CHECK(std::string(e.what()).find("99") != std::string::npos);
  }

  CHECK_THROWS_AS((void)parse_rule_file("missing_file.rule"), Error);
  try {
    (void)parse_rule_file("missing_file.rule");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("report serializers are deterministic") {
  RulePtr rule = builtin_rule("penrose");
  SubstMatrix a = substitution_matrix(*rule);
  SpectralReport rep = spectral_report(*rule);
  std::string s1 = spectral_text(a, rep, rule->xi());
  std::string s2 = spectral_text(a, rep, rule->xi());
  CHECK(s1 == s2);
  CHECK(s1.find("xi 1.61803398875") != std::string::npos);
  CHECK(s1.find("pisot true") != std::string::npos);
  CHECK(s1.find("lambda1 2.61803398875") != std::string::npos);
}

TEST_CASE("patch csv has one row per tile") {
  RulePtr rule = builtin_rule("penrose");
  Patch p = supertile(rule, 1, 3);
  std::string csv = patch_to_csv(p);
  // Provenance comment + column header + one line per tile.
  CHECK(count_occurrences(csv, "\n") ==
        static_cast<int>(p.tiles.size()) + 2);
  CHECK(csv.find("tileId,level,address,rotationIndex,reflect,tx,ty") !=
        std::string::npos);
}

TEST_CASE("svg rendering") {
  RulePtr rule = builtin_rule("penrose");

  // Single basic tile: exactly one polygon element.
  std::string one = render_svg(supertile(rule, 1, 0));
  CHECK(count_occurrences(one, "<polygon") == 1);

  // Level-4 supertiles: acute root has 55 tiles, obtuse root 34.
  std::string acute = render_svg(supertile(rule, 1, 4));
  CHECK(count_occurrences(acute, "<polygon") == 55);
  std::string obtuse = render_svg(supertile(rule, 2, 4));
  CHECK(count_occurrences(obtuse, "<polygon") == 34);

  // Two fills, one per tile type.
  CHECK(count_occurrences(acute, "fill=\"#4e79a7\"") == 34);
  CHECK(count_occurrences(acute, "fill=\"#f28e2b\"") == 21);

  // Determinism.
  CHECK(render_svg(supertile(rule, 1, 4)) == acute);

  // Net rendering: one circle per point.
  NetWindow net = extract_net(supertile(rule, 1, 4));
  std::string netSvg = render_svg(net);
  CHECK(count_occurrences(netSvg, "<circle") == 55);

  // Match rendering: 10 pairs produce 10 segments.
  std::vector<Vec2> a, b;
  for (int i = 0; i < 10; ++i) {
    a.push_back({static_cast<double>(i), 0.0});
    b.push_back({static_cast<double>(i) + 0.2, 0.1});
  }
  MatchResult m = bottleneck_match(a, b);
  REQUIRE(m.pairs.size() == 10);
  std::string matchSvg = render_svg(a, b, m);
  CHECK(count_occurrences(matchSvg, "<line") == 10);

  // Empty patch refuses to render.
  CHECK_THROWS_AS((void)render_svg(Patch{}), Error);
}

TEST_CASE("report text round trip stability") {
  // bk / laczkovich / layers / profile serializers all end with newline and
  // repeat identically.
  RulePtr rule = builtin_rule("chair");
  ProfileOptions opts;
  opts.phases = 1;
  ProfileReport rep = displacement_profile(rule, 1, {3, 4}, std::sqrt(3.0),
                                           opts);
  std::string t1 = profile_text(rep);
  CHECK(t1 == profile_text(rep));
  CHECK(t1.back() == '\n');
  CHECK(t1.find("growth-exponent") != std::string::npos);
  std::string csv = profile_to_csv(rep);
  CHECK(csv.find("level,windowEdge,netPoints,latticePoints,bottleneck") !=
        std::string::npos);
}

TEST_CASE("file io errors") {
  CHECK_THROWS_AS((void)read_file("/nonexistent/path/x.txt"), Error);
  CHECK_THROWS_AS(write_file("/nonexistent/dir/x.txt", "data"), Error);
}
