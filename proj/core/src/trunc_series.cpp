#include "themelab/trunc_series.hpp"

#include <algorithm>
#include <sstream>

#include "themelab/errors.hpp"

namespace themelab {

TruncSeries::TruncSeries(int prec) {
  if (prec < 1) throw InvalidArgument("series precision must be >= 1");
  coeffs_.assign(static_cast<std::size_t>(prec), Rational(0));
}

TruncSeries::TruncSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("series precision must be >= 1");
}

TruncSeries TruncSeries::constant(const Rational& c, int prec) {
  TruncSeries s(prec);
  s.coeffs_[0] = c;
  return s;
}

TruncSeries TruncSeries::monomial(const Rational& c, int m, int prec) {
  if (m < 0) throw InvalidArgument("negative exponent in series monomial");
  TruncSeries s(prec);
  if (m < prec) s.coeffs_[m] = c;
  return s;
}

const Rational& TruncSeries::coefficient(int m) const {
  if (m < 0) throw InvalidArgument("negative coefficient index");
  if (m >= prec())
    throw PrecisionExceeded("coefficient of b^" + std::to_string(m) + " requested at precision " +
                            std::to_string(prec()));
  return coeffs_[m];
}

void TruncSeries::set(int m, const Rational& value) {
  if (m < 0 || m >= prec()) throw PrecisionExceeded("set: index outside the stored window");
  coeffs_[m] = value;
}

std::optional<int> TruncSeries::valuation() const {
  for (int m = 0; m < prec(); ++m)
    if (coeffs_[m] != 0) return m;
  return std::nullopt;
}

TruncSeries TruncSeries::truncated(int p) const {
  if (p < 1 || p > prec()) throw InvalidArgument("truncated: precision out of range");
  return TruncSeries(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + p));
}

TruncSeries TruncSeries::operator-() const {
  TruncSeries r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& other) {
  if (other.prec() < prec()) coeffs_.resize(other.coeffs_.size());
  for (int m = 0; m < prec(); ++m) coeffs_[m] += other.coeffs_[m];
  return *this;
}

TruncSeries& TruncSeries::operator-=(const TruncSeries& other) {
  if (other.prec() < prec()) coeffs_.resize(other.coeffs_.size());
  for (int m = 0; m < prec(); ++m) coeffs_[m] -= other.coeffs_[m];
  return *this;
}

TruncSeries& TruncSeries::operator*=(const Rational& c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

TruncSeries TruncSeries::shift_up(int m) const {
  if (m < 0) return shift_down(-m);
  TruncSeries r(prec());
  for (int i = prec() - 1; i >= m; --i) r.coeffs_[i] = coeffs_[i - m];
  return r;
}

TruncSeries TruncSeries::shift_down(int m) const {
  if (m == 0) return *this;
  if (m < 0) return shift_up(-m);
  if (m >= prec()) throw PrecisionExceeded("shift_down: no certified coefficients left");
  for (int i = 0; i < m; ++i)
    if (coeffs_[i] != 0)
      throw NotSolvable("shift_down: series is not divisible by b^" + std::to_string(m));
  return TruncSeries(std::vector<Rational>(coeffs_.begin() + m, coeffs_.end()));
}

TruncSeries TruncSeries::derivative() const {
  if (prec() < 2) throw InvalidArgument("derivative needs precision >= 2");
  TruncSeries r(prec() - 1);
  for (int m = 1; m < prec(); ++m) r.coeffs_[m - 1] = coeffs_[m] * m;
  return r;
}

TruncSeries TruncSeries::b2_derivative() const {
  // coefficient m of b^2 S' is (m-1) c_{m-1}.
  TruncSeries r(prec());
  for (int m = 2; m < prec(); ++m) r.coeffs_[m] = coeffs_[m - 1] * (m - 1);
  return r;
}

TruncSeries TruncSeries::inverse() const {
  if (coeffs_[0] == 0) throw NotAUnit("series with zero constant term is not invertible");
  const int n = prec();
  TruncSeries r(n);
  const Rational inv0 = 1 / coeffs_[0];
  r.coeffs_[0] = inv0;
  for (int m = 1; m < n; ++m) {
    Rational acc = 0;
    for (int i = 1; i <= m; ++i)
      if (coeffs_[i] != 0) acc += coeffs_[i] * r.coeffs_[m - i];
    r.coeffs_[m] = -acc * inv0;
  }
  return r;
}

bool operator==(const TruncSeries& x, const TruncSeries& y) {
  const int n = std::min(x.prec(), y.prec());
  for (int m = 0; m < n; ++m)
    if (x.coeffs_[m] != y.coeffs_[m]) return false;
  return true;
}

TruncSeries operator+(TruncSeries x, const TruncSeries& y) { return x += y; }
TruncSeries operator-(TruncSeries x, const TruncSeries& y) { return x -= y; }

TruncSeries operator*(const TruncSeries& x, const TruncSeries& y) {
  const int n = std::min(x.prec(), y.prec());
  std::vector<Rational> out(static_cast<std::size_t>(n), Rational(0));
  const auto& a = x.coeffs();
  const auto& b = y.coeffs();
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j < n; ++j)
      if (b[j] != 0) out[i + j] += a[i] * b[j];
  }
  return TruncSeries(std::move(out));
}

TruncSeries operator*(TruncSeries x, const Rational& c) { return x *= c; }
TruncSeries operator*(const Rational& c, TruncSeries x) { return x *= c; }

std::string to_string(const TruncSeries& s) {
  std::ostringstream os;
  bool first = true;
  for (int m = 0; m < s.prec(); ++m) {
    const Rational& c = s[m];
    if (c == 0) continue;
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (m == 0) {
      os << to_string(mag);
      continue;
    }
    if (mag != 1) os << to_string(mag) << "*";
    os << "b";
    if (m > 1) os << "^" << m;
  }
  if (first) return "0";
  return os.str();
}

}  // namespace themelab
