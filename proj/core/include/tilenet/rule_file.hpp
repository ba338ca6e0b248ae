#pragma once

#include <string>

#include "tilenet/substitution.hpp"

namespace tilenet {

// Parses the line-oriented rule grammar (see rules/*.rule):
//
//   name <identifier>
//   q <integer>                      rotation order
//   xi <expr>                        inflation constant
//   tile <id>                        followed by vertex lines
//   vertex <expr> <expr>
//   children <tile id>               followed by child lines
//   child <tile id> rot <k> [reflect] translate <expr> <expr>
//
// '#' starts a comment; expressions are whitespace-free terms over numbers,
// + - * /, parentheses and sqrt().  The parsed rule is validate_rule-checked
// before it is returned.
RulePtr parse_rule_file(const std::string& path);
RulePtr parse_rule_text(const std::string& text, const std::string& sourceName);

// Evaluates one numeric expression (the rule-file dialect); throws
// SyntaxError on malformed input.
double eval_expression(const std::string& text);

}  // namespace tilenet
