#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "themelab/series_parse.hpp"
#include "themelab/trunc_series.hpp"

namespace themelab {

/// Element of the b-completed algebra generated by a, b with
/// a.b - b.a = b^2, kept in the normal form sum_i c_i(b) a^i (all series
/// coefficients to the left of the powers of a).
class OreOperator {
 public:
  explicit OreOperator(int prec = kDefaultPrecision);
  /// coeffs[i] is the left coefficient of a^i. Precision is the minimum.
  explicit OreOperator(std::vector<TruncSeries> coeffs);

  static OreOperator scalar(const TruncSeries& s);
  static OreOperator a(int prec);
  static OreOperator b(int prec);
  /// a - mu.b
  static OreOperator linear(const Rational& mu, int prec);

  int prec() const { return prec_; }
  /// Highest i with c_i non-zero to precision, or -1 for the zero operator.
  int degree() const;
  /// c_i; the zero series when i exceeds the stored length.
  TruncSeries coeff(int i) const;
  const std::vector<TruncSeries>& coeffs() const { return coeffs_; }

  OreOperator& operator+=(const OreOperator& other);
  OreOperator& operator-=(const OreOperator& other);

  friend bool operator==(const OreOperator& x, const OreOperator& y);

 private:
  void normalize();
  std::vector<TruncSeries> coeffs_;
  int prec_;
};

OreOperator operator+(OreOperator x, const OreOperator& y);
OreOperator operator-(OreOperator x, const OreOperator& y);

/// Normal-form product, pushing a to the right with a.c = c.a + b^2.c'.
OreOperator ore_mul(const OreOperator& lhs, const OreOperator& rhs);
inline OreOperator operator*(const OreOperator& x, const OreOperator& y) { return ore_mul(x, y); }

/// Applies P to x in a host module. `a_action(x)` must return a.x, and
/// the element type must support x + y and TruncSeries * x.
template <class Element, class AAction>
Element ore_apply(const OreOperator& op, const Element& x, AAction&& a_action) {
  const int d = op.degree();
  Element iterate = x;
  Element acc = op.coeff(0) * iterate;
  for (int i = 1; i <= d; ++i) {
    iterate = a_action(iterate);
    acc = acc + op.coeff(i) * iterate;
  }
  return acc;
}

/// "(1 + b^2)*a^2 - 3*b*a + ..." style rendering.
std::string to_string(const OreOperator& op);

/// Parses e.g. "(a - 5/2 b) * inv(1 + 2 b^3) * (a - 7/2 b)".
OreOperator parse_operator(std::string_view text, int prec, const ParameterMap& params = {});

/// Homogeneous operator sum_j c_j b^(k-j) a^j of degree k.
class HomogeneousOperator {
 public:
  HomogeneousOperator() = default;
  /// coeffs[j] multiplies b^(k-j) a^j; degree k = coeffs.size() - 1.
  explicit HomogeneousOperator(std::vector<Rational> coeffs);

  /// (a - mu_1 b)(a - mu_2 b)...(a - mu_k b), expanded.
  static HomogeneousOperator from_factors(const std::vector<Rational>& mus);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& coeff(int j) const { return coeffs_.at(static_cast<std::size_t>(j)); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

  OreOperator to_ore(int prec) const;

  friend bool operator==(const HomogeneousOperator&, const HomogeneousOperator&) = default;

 private:
  std::vector<Rational> coeffs_;
};

std::string to_string(const HomogeneousOperator& op);

struct RightDivision {
  HomogeneousOperator quotient;
  /// P = quotient.(a - mu.b) + remainder.b^k
  Rational remainder;
};

/// Right division by a - mu.b; requires degree >= 1.
RightDivision right_divide(const HomogeneousOperator& p, const Rational& mu);

/// Exponents mu_1..mu_k with P = (a - mu_1 b)...(a - mu_k b), all in
/// lambda_class + Z, with mu_j + j non-decreasing. Throws
/// FactorizationFailed when no such factorization exists.
std::vector<Rational> factor_homogeneous(const HomogeneousOperator& p, const Rational& lambda_class);

/// Coefficients (constant term first) of the Bernstein polynomial
/// prod_j (x + mu_j). The order of the factors is immaterial here.
std::vector<Rational> bernstein_polynomial(const std::vector<Rational>& mus);

}  // namespace themelab
