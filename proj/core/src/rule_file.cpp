#include "tilenet/rule_file.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace tilenet {

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::string& where)
      : text_(text), where_(where) {}

  double run() {
    double v = sum();
    skip_space();
    if (pos_ != text_.size())
      fail(ErrorCode::SyntaxError,
           where_ + ": trailing characters in expression '" +
               std::string(text_) + "' at column " + std::to_string(pos_ + 1));
    return v;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void bad(const std::string& msg) {
    fail(ErrorCode::SyntaxError, where_ + ": " + msg + " in expression '" +
                                     std::string(text_) + "' at column " +
                                     std::to_string(pos_ + 1));
  }

  double sum() {
    double v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      if (eat('*'))
        v *= factor();
      else if (eat('/')) {
        double d = factor();
        if (d == 0.0) bad("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double factor() {
    skip_space();
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    if (eat('(')) {
      double v = sum();
      if (!eat(')')) bad("missing ')'");
      return v;
    }
    if (pos_ + 4 < text_.size() && text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!eat('(')) bad("sqrt needs '('");
      double v = sum();
      if (!eat(')')) bad("missing ')'");
      if (v < 0) bad("sqrt of a negative value");
      return std::sqrt(v);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.'))
      ++pos_;
    if (pos_ == start) bad("expected a number");
    std::string num(text_.substr(start, pos_ - start));
    char* endp = nullptr;
    double v = std::strtod(num.c_str(), &endp);
    if (endp != num.c_str() + num.size()) bad("malformed number '" + num + "'");
    return v;
  }

  std::string_view text_;
  std::string where_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

double eval_expression(const std::string& text) {
  return ExprParser(text, "expression").run();
}

RulePtr parse_rule_text(const std::string& text,
                        const std::string& sourceName) {
  std::string name;
  int q = 0;
  double xi = 0.0;
  bool haveXi = false;
  std::map<int, std::vector<Vec2>> polygons;
  std::map<int, std::vector<ChildPlacement>> childMap;
  std::map<int, int> childLine;  // for later semantic checks
  int currentTile = 0;      // tile whose vertices are being read
  int currentChildren = 0;  // tile whose children are being read

  std::istringstream stream(text);
  std::string line;
  int lineNo = 0;
  auto where = [&] { return sourceName + ":" + std::to_string(lineNo); };
  auto expr = [&](const std::string& tok) {
    return ExprParser(tok, where()).run();
  };
  auto intval = [&](const std::string& tok, const char* what) {
    char* endp = nullptr;
    long v = std::strtol(tok.c_str(), &endp, 10);
    if (endp != tok.c_str() + tok.size())
      fail(ErrorCode::SyntaxError,
           where() + ": " + what + " must be an integer, got '" + tok + "'");
    return static_cast<int>(v);
  };

  while (std::getline(stream, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string& key = tok[0];

    if (key == "name") {
      if (tok.size() != 2)
        fail(ErrorCode::SyntaxError, where() + ": name takes one identifier");
      name = tok[1];
    } else if (key == "q") {
      if (tok.size() != 2)
        fail(ErrorCode::SyntaxError, where() + ": q takes one integer");
      q = intval(tok[1], "q");
    } else if (key == "xi") {
      if (tok.size() != 2)
        fail(ErrorCode::SyntaxError,
             where() + ": xi takes one whitespace-free expression");
      xi = expr(tok[1]);
      haveXi = true;
    } else if (key == "tile") {
      if (tok.size() != 2)
        fail(ErrorCode::SyntaxError, where() + ": tile takes one integer id");
      currentTile = intval(tok[1], "tile id");
      currentChildren = 0;
      if (polygons.count(currentTile))
        fail(ErrorCode::SemanticError,
             where() + ": duplicate tile id " + std::to_string(currentTile));
      polygons[currentTile] = {};
    } else if (key == "vertex") {
      if (currentTile == 0)
        fail(ErrorCode::SyntaxError, where() + ": vertex outside a tile block");
      if (tok.size() != 3)
        fail(ErrorCode::SyntaxError, where() + ": vertex takes two expressions");
      polygons[currentTile].push_back({expr(tok[1]), expr(tok[2])});
    } else if (key == "children") {
      if (tok.size() != 2)
        fail(ErrorCode::SyntaxError, where() + ": children takes one tile id");
      currentChildren = intval(tok[1], "tile id");
      currentTile = 0;
      if (childMap.count(currentChildren))
        fail(ErrorCode::SemanticError,
             where() + ": duplicate children block for tile " +
                 std::to_string(currentChildren));
      childMap[currentChildren] = {};
      childLine[currentChildren] = lineNo;
    } else if (key == "child") {
      if (currentChildren == 0)
        fail(ErrorCode::SyntaxError,
             where() + ": child outside a children block");
      // child <id> rot <k> [reflect] translate <x> <y>
      std::size_t i = 1;
      if (tok.size() < 7)
        fail(ErrorCode::SyntaxError,
             where() + ": child needs 'child ID rot K [reflect] translate X Y'");
      ChildPlacement cp;
      cp.tileId = intval(tok[i++], "child tile id");
      if (tok[i++] != "rot")
        fail(ErrorCode::SyntaxError, where() + ": expected 'rot'");
      cp.iso.rot = intval(tok[i++], "rotation index");
      if (tok[i] == "reflect") {
        cp.iso.reflect = true;
        ++i;
      }
      if (i >= tok.size() || tok[i] != "translate")
        fail(ErrorCode::SyntaxError, where() + ": expected 'translate'");
      ++i;
      if (i + 2 != tok.size())
        fail(ErrorCode::SyntaxError,
             where() + ": translate takes two expressions");
      cp.iso.t = {expr(tok[i]), expr(tok[i + 1])};
      childMap[currentChildren].push_back(cp);
      childLine[currentChildren] = lineNo;
    } else {
      fail(ErrorCode::SyntaxError, where() + ": unknown directive '" + key + "'");
    }
  }

  if (name.empty()) name = sourceName;
  if (q <= 0) fail(ErrorCode::SemanticError, sourceName + ": missing q");
  if (!haveXi) fail(ErrorCode::SemanticError, sourceName + ": missing xi");
  if (polygons.empty())
    fail(ErrorCode::SemanticError, sourceName + ": no tiles defined");

  int n = static_cast<int>(polygons.size());
  std::vector<std::vector<Vec2>> polyList(n);
  for (const auto& [id, poly] : polygons) {
    if (id < 1 || id > n)
      fail(ErrorCode::SemanticError,
           sourceName + ": tile ids must be 1.." + std::to_string(n) +
               ", got " + std::to_string(id));
    polyList[id - 1] = poly;
  }
  std::vector<std::vector<ChildPlacement>> childList(n);
  for (const auto& [id, kids] : childMap) {
    if (id < 1 || id > n)
      fail(ErrorCode::SemanticError,
           sourceName + ":" + std::to_string(childLine[id]) +
               ": children block for unknown tile id " + std::to_string(id));
    for (const auto& c : kids)
      if (c.tileId < 1 || c.tileId > n)
        fail(ErrorCode::SemanticError,
             sourceName + ":" + std::to_string(childLine[id]) +
                 ": child references unknown tile id " +
                 std::to_string(c.tileId));
    childList[id - 1] = kids;
  }
  for (int i = 0; i < n; ++i)
    if (childList[i].empty())
      fail(ErrorCode::SemanticError,
           sourceName + ": tile " + std::to_string(i + 1) +
               " has no children block");

  auto rule = std::make_shared<SubstitutionRule>(name, q, xi, polyList,
                                                 childList);
  ValidationReport report = validate_rule(*rule);
  if (!report.ok) {
    std::string detail;
    for (const auto& tv : report.perTile) {
      if (tv.areaResidualRel >= 1e-8)
        detail += " tile " + std::to_string(tv.tileId) + " area residual " +
                  std::to_string(tv.areaResidualRel) + ";";
      if (tv.overlapFindings > 0)
        detail += " tile " + std::to_string(tv.tileId) + " has " +
                  std::to_string(tv.overlapFindings) + " overlap findings;";
    }
    fail(ErrorCode::SemanticError,
         sourceName + ": rule failed dissection validation:" + detail);
  }
  return rule;
}

RulePtr parse_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open rule file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string base = path;
  auto slash = base.find_last_of('/');
  if (slash != std::string::npos) base = base.substr(slash + 1);
  return parse_rule_text(buf.str(), base);
}

}  // namespace tilenet
