#pragma once

#include <optional>
#include <string>
#include <vector>

#include "themelab/rational.hpp"

namespace themelab {

/// Default working precision (number of certified b-coefficients).
inline constexpr int kDefaultPrecision = 32;

/// A power series in b with exact rational coefficients, known modulo
/// b^prec. Coefficients at b^m for m >= prec are unknown, not zero.
///
/// Binary operations take the smaller of the two precisions. Equality is
/// agreement of all coefficients below the smaller precision.
class TruncSeries {
 public:
  /// The zero series to precision `prec` (prec >= 1).
  explicit TruncSeries(int prec = kDefaultPrecision);
  /// Takes ownership of coefficients c_0 .. c_{prec-1}; must be non-empty.
  explicit TruncSeries(std::vector<Rational> coeffs);

  static TruncSeries constant(const Rational& c, int prec);
  static TruncSeries one(int prec) { return constant(Rational(1), prec); }
  /// c * b^m; silently zero when m >= prec.
  static TruncSeries monomial(const Rational& c, int m, int prec);

  int prec() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  /// Unchecked access, 0 <= m < prec().
  const Rational& operator[](int m) const { return coeffs_[m]; }
  /// Checked access; throws PrecisionExceeded when m >= prec().
  const Rational& coefficient(int m) const;
  void set(int m, const Rational& value);

  /// Smallest m with a non-zero stored coefficient; nullopt means the
  /// valuation is >= prec.
  std::optional<int> valuation() const;
  bool is_zero() const { return !valuation().has_value(); }
  bool is_unit() const { return coeffs_[0] != 0; }

  /// Forget every coefficient from b^p on (p <= prec()).
  TruncSeries truncated(int p) const;

  TruncSeries operator-() const;
  TruncSeries& operator+=(const TruncSeries& other);
  TruncSeries& operator-=(const TruncSeries& other);
  TruncSeries& operator*=(const Rational& c);

  /// b^m * S, stored at the same precision (the top m coefficients move
  /// beyond the stored window).
  TruncSeries shift_up(int m) const;
  /// S / b^m; requires valuation >= m. Precision drops by m.
  TruncSeries shift_down(int m) const;

  /// d/db, precision drops by one; requires prec >= 2.
  TruncSeries derivative() const;
  /// b^2 * d/db. This derivation keeps the precision.
  TruncSeries b2_derivative() const;

  /// Multiplicative inverse; throws NotAUnit when S(0) == 0.
  TruncSeries inverse() const;

  friend bool operator==(const TruncSeries& x, const TruncSeries& y);

 private:
  std::vector<Rational> coeffs_;
};

TruncSeries operator+(TruncSeries x, const TruncSeries& y);
TruncSeries operator-(TruncSeries x, const TruncSeries& y);
TruncSeries operator*(const TruncSeries& x, const TruncSeries& y);
TruncSeries operator*(TruncSeries x, const Rational& c);
TruncSeries operator*(const Rational& c, TruncSeries x);

// Named operations.
inline TruncSeries add(const TruncSeries& s, const TruncSeries& t) { return s + t; }
inline TruncSeries mul(const TruncSeries& s, const TruncSeries& t) { return s * t; }
inline TruncSeries derivative(const TruncSeries& s) { return s.derivative(); }
inline TruncSeries invert(const TruncSeries& s) { return s.inverse(); }
inline const Rational& coefficient(const TruncSeries& s, int m) { return s.coefficient(m); }

/// Renders in the literal syntax accepted by parse_series, e.g.
/// "1 + 2/3*b^2 - b^5". The zero series renders as "0".
std::string to_string(const TruncSeries& s);

}  // namespace themelab
