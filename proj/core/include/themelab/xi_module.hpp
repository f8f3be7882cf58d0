#pragma once

#include <optional>
#include <string>
#include <vector>

#include "themelab/trunc_series.hpp"

namespace themelab {

/// Element sum_j c_j(b) e_{lambda,j} of the module Xi_lambda^(N) of formal
/// expansions, where e_{lambda,j} stands for s^(lambda-1) (Log s)^j / j!.
/// a acts as multiplication by s, b as the primitive vanishing at 0:
///   a.e_{lambda,0} = lambda.b.e_{lambda,0}
///   a.e_{lambda,j} = lambda.b.e_{lambda,j} + b.e_{lambda,j-1}
/// Invariants: 0 < lambda <= 1, all components share one precision.
class XiElement {
 public:
  XiElement(Rational lambda, int max_log_degree, int prec);
  XiElement(Rational lambda, std::vector<TruncSeries> comps);

  /// c.b^m.e_{lambda,j} in Xi_lambda^(N).
  static XiElement monomial(const Rational& lambda, int max_log_degree, int prec,
                            const Rational& c, int m, int j);
  static XiElement basis(const Rational& lambda, int max_log_degree, int prec, int j) {
    return monomial(lambda, max_log_degree, prec, Rational(1), 0, j);
  }

  const Rational& lambda() const { return lambda_; }
  int max_log_degree() const { return static_cast<int>(comps_.size()) - 1; }
  int prec() const { return comps_.front().prec(); }
  const TruncSeries& comp(int j) const { return comps_.at(static_cast<std::size_t>(j)); }
  const std::vector<TruncSeries>& comps() const { return comps_; }

  bool is_zero() const;
  /// Highest j with a non-zero component, nullopt for zero.
  std::optional<int> log_degree() const;
  /// Smallest b-valuation over all components, nullopt when all vanish.
  std::optional<int> valuation() const;

  /// Re-embeds into Xi^(n); dropping non-zero components is an error.
  XiElement with_log_bound(int n) const;
  XiElement truncated(int prec) const;

  XiElement& operator+=(const XiElement& other);
  XiElement& operator-=(const XiElement& other);
  XiElement operator-() const;

  friend bool operator==(const XiElement& x, const XiElement& y);

 private:
  void check_compatible(const XiElement& other) const;
  Rational lambda_;
  std::vector<TruncSeries> comps_;
};

XiElement operator+(XiElement x, const XiElement& y);
XiElement operator-(XiElement x, const XiElement& y);
/// Left multiplication by a series.
XiElement operator*(const TruncSeries& s, const XiElement& x);
XiElement operator*(const Rational& c, XiElement x);

/// b.x; precision kept, the top coefficient moves out of the window.
XiElement b_mul(const XiElement& x);
/// a.x. Precision is kept: a maps b^P.Xi into b^(P+1).Xi.
XiElement a_apply(const XiElement& x);

/// s^(mu-1) (Log s)^j / j! as an element of Xi_lambda^(N); requires
/// mu - lambda to be a non-negative integer and j <= N. Built by iterating
/// a on e_{lambda,j}.
XiElement power_monomial(const Rational& mu, int j, const Rational& lambda, int max_log_degree,
                         int prec);

/// Inverse of a - (lambda+q).b from b.Xi^(j) onto the complement of the
/// kernel C.b^q.e_{lambda,0} in Xi^(j), plus C.b^q.e_{lambda,j+1}; j is
/// y's top log degree bound unless given. The result lives in Xi^(j+1)
/// with precision one lower than y. Its b^q.e_{lambda,j+1} coefficient
/// equals the b^(q+1).e_{lambda,j} coefficient of y.
XiElement solve_shifted_inverse(const XiElement& y, int q, std::optional<int> j = std::nullopt);

/// The quotient Xi^(N) -> Xi^(N-1) by Xi^(0): drops e_{lambda,0} and
/// shifts e_{lambda,j} to e_{lambda,j-1}. Requires N >= 1.
XiElement xi_quotient_drop_log0(const XiElement& x);

/// "(1 + b)*e0 + 3*b^2*e1"
std::string to_string(const XiElement& x);

}  // namespace themelab
