#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "themelab/series_parse.hpp"
#include "themelab/xi_module.hpp"

namespace themelab {

/// A parsed expression such as "log(s)*s^(1/2) + (z + b)*s^(-1/2)".
/// Terms are series coefficients times s^e (Log s)^j; log(s)^j is the
/// literal power, i.e. j! e_{lambda,j} in the Xi basis. Identifiers other
/// than s and b are parameters supplied at evaluation time.
class XiExpression {
 public:
  explicit XiExpression(std::string_view text);

  const std::string& text() const { return text_; }
  /// Parameter names in order of first appearance.
  const std::vector<std::string>& parameters() const { return parameters_; }

  /// The element of Xi_lambda^(N), with lambda read off from the
  /// s-exponents. N is at least `min_log_bound` and at least the highest
  /// log power used.
  XiElement evaluate(const ParameterMap& params, int prec, int min_log_bound = 0) const;

 private:
  std::string text_;
  std::shared_ptr<const expr::Node> tree_;
  std::vector<std::string> parameters_;
};

inline XiElement parse_xi(std::string_view text, int prec, const ParameterMap& params = {},
                          int min_log_bound = 0) {
  return XiExpression(text).evaluate(params, prec, min_log_bound);
}

}  // namespace themelab
