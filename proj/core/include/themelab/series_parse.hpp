#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "themelab/rational.hpp"
#include "themelab/trunc_series.hpp"

namespace themelab {

/// Named rational parameters substituted into literals at evaluation time.
using ParameterMap = std::map<std::string, Rational, std::less<>>;

namespace expr {

/// Syntax tree shared by the series, operator and Xi literal languages.
/// Juxtaposition ("5/2 b") is multiplication.
struct Node {
  enum class Kind { Number, Ident, Call, Add, Sub, Mul, Div, Neg, Pow };
  Kind kind;
  Rational number;             // Number
  std::string name;            // Ident, Call
  std::vector<std::unique_ptr<Node>> children;
};
using NodePtr = std::unique_ptr<Node>;

NodePtr parse(std::string_view text);

/// Evaluates a node that may only reference numbers and parameters.
Rational evaluate_scalar(const Node& node, const ParameterMap& params);

/// Names of all identifiers (excluding call names) appearing in the tree.
void collect_identifiers(const Node& node, std::vector<std::string>& out);

}  // namespace expr

/// Evaluates a parsed series literal (see parse_series).
TruncSeries evaluate_series(const expr::Node& node, int prec, const ParameterMap& params = {});

/// Parses a series literal such as "1 + 2/3*b^2 - b^5" to precision prec.
/// Identifiers other than b are looked up in params; inv(...) inverts a
/// unit series.
TruncSeries parse_series(std::string_view text, int prec, const ParameterMap& params = {});

}  // namespace themelab
