#include "themelab/xi_module.hpp"

#include <algorithm>
#include <sstream>

#include "themelab/errors.hpp"

namespace themelab {

namespace {

void check_lambda(const Rational& lambda) {
  if (lambda <= 0 || lambda > 1)
    throw InvalidArgument("Xi class lambda must lie in (0, 1], got " + to_string(lambda));
}

}  // namespace

XiElement::XiElement(Rational lambda, int max_log_degree, int prec) : lambda_(std::move(lambda)) {
  check_lambda(lambda_);
  if (max_log_degree < 0) throw InvalidArgument("log degree bound must be >= 0");
  comps_.assign(static_cast<std::size_t>(max_log_degree + 1), TruncSeries(prec));
}

XiElement::XiElement(Rational lambda, std::vector<TruncSeries> comps)
    : lambda_(std::move(lambda)), comps_(std::move(comps)) {
  check_lambda(lambda_);
  if (comps_.empty()) throw InvalidArgument("Xi element needs at least one component");
  int p = comps_.front().prec();
  for (const auto& c : comps_) p = std::min(p, c.prec());
  for (auto& c : comps_)
    if (c.prec() > p) c = c.truncated(p);
}

XiElement XiElement::monomial(const Rational& lambda, int max_log_degree, int prec,
                              const Rational& c, int m, int j) {
  if (j < 0 || j > max_log_degree) throw InvalidArgument("log degree outside Xi^(N)");
  XiElement x(lambda, max_log_degree, prec);
  x.comps_[j] = TruncSeries::monomial(c, m, prec);
  return x;
}

bool XiElement::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c.is_zero(); });
}

std::optional<int> XiElement::log_degree() const {
  for (int j = max_log_degree(); j >= 0; --j)
    if (!comps_[j].is_zero()) return j;
  return std::nullopt;
}

std::optional<int> XiElement::valuation() const {
  std::optional<int> v;
  for (const auto& c : comps_) {
    const auto cv = c.valuation();
    if (cv && (!v || *cv < *v)) v = cv;
  }
  return v;
}

XiElement XiElement::with_log_bound(int n) const {
  if (n < 0) throw InvalidArgument("log degree bound must be >= 0");
  std::vector<TruncSeries> out;
  for (int j = 0; j <= n; ++j) out.push_back(j <= max_log_degree() ? comps_[j] : TruncSeries(prec()));
  for (int j = n + 1; j <= max_log_degree(); ++j)
    if (!comps_[j].is_zero()) throw InvalidArgument("with_log_bound would drop a non-zero component");
  return XiElement(lambda_, std::move(out));
}

XiElement XiElement::truncated(int prec) const {
  std::vector<TruncSeries> out;
  for (const auto& c : comps_) out.push_back(c.truncated(prec));
  return XiElement(lambda_, std::move(out));
}

void XiElement::check_compatible(const XiElement& other) const {
  if (lambda_ != other.lambda_)
    throw InvalidArgument("Xi elements of different classes: " + to_string(lambda_) + " vs " +
                          to_string(other.lambda_));
  if (max_log_degree() != other.max_log_degree())
    throw InvalidArgument("Xi elements with different log degree bounds");
}

XiElement& XiElement::operator+=(const XiElement& other) {
  check_compatible(other);
  for (std::size_t j = 0; j < comps_.size(); ++j) comps_[j] += other.comps_[j];
  return *this;
}

XiElement& XiElement::operator-=(const XiElement& other) {
  check_compatible(other);
  for (std::size_t j = 0; j < comps_.size(); ++j) comps_[j] -= other.comps_[j];
  return *this;
}

XiElement XiElement::operator-() const {
  XiElement r(*this);
  for (auto& c : r.comps_) c = -c;
  return r;
}

bool operator==(const XiElement& x, const XiElement& y) {
  if (x.lambda_ != y.lambda_) return false;
  const int n = std::max(x.max_log_degree(), y.max_log_degree());
  for (int j = 0; j <= n; ++j) {
    const bool in_x = j <= x.max_log_degree();
    const bool in_y = j <= y.max_log_degree();
    if (in_x && in_y) {
      if (!(x.comps_[j] == y.comps_[j])) return false;
    } else if (in_x ? !x.comps_[j].is_zero() : !y.comps_[j].is_zero()) {
      return false;
    }
  }
  return true;
}

XiElement operator+(XiElement x, const XiElement& y) { return x += y; }
XiElement operator-(XiElement x, const XiElement& y) { return x -= y; }

XiElement operator*(const TruncSeries& s, const XiElement& x) {
  std::vector<TruncSeries> out;
  out.reserve(x.comps().size());
  for (const auto& c : x.comps()) out.push_back(s * c);
  return XiElement(x.lambda(), std::move(out));
}

XiElement operator*(const Rational& c, XiElement x) {
  std::vector<TruncSeries> out;
  for (const auto& comp : x.comps()) out.push_back(comp * c);
  return XiElement(x.lambda(), std::move(out));
}

XiElement b_mul(const XiElement& x) {
  std::vector<TruncSeries> out;
  for (const auto& c : x.comps()) out.push_back(c.shift_up(1));
  return XiElement(x.lambda(), std::move(out));
}

XiElement a_apply(const XiElement& x) {
  const int n = x.max_log_degree();
  std::vector<TruncSeries> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    const auto& c = x.comp(j);
    TruncSeries r = c.shift_up(1) * x.lambda() + c.b2_derivative();
    if (j < n) r += x.comp(j + 1).shift_up(1);
    out.push_back(std::move(r));
  }
  return XiElement(x.lambda(), std::move(out));
}

XiElement power_monomial(const Rational& mu, int j, const Rational& lambda, int max_log_degree,
                         int prec) {
  const Rational diff = mu - lambda;
  if (!is_integer(diff) || diff < 0)
    throw InvalidArgument("s^(mu-1) with mu = " + to_string(mu) + " is not in Xi_" +
                          to_string(lambda));
  const long m = to_long(diff);
  XiElement x = XiElement::basis(lambda, max_log_degree, prec, j);
  for (long i = 0; i < m; ++i) x = a_apply(x);
  return x;
}

XiElement solve_shifted_inverse(const XiElement& y, int q, std::optional<int> top) {
  if (q < 0) throw InvalidArgument("solve_shifted_inverse: q must be >= 0");
  const int j = top.value_or(y.max_log_degree());
  for (int h = j + 1; h <= y.max_log_degree(); ++h)
    if (!y.comp(h).is_zero())
      throw NotSolvable("solve_shifted_inverse: input has log degree above " + std::to_string(j));
  for (int h = 0; h <= std::min(j, y.max_log_degree()); ++h)
    if (!y.comp(h).is_zero() && y.comp(h)[0] != 0)
      throw NotSolvable("solve_shifted_inverse: input is not in b.Xi (component e" +
                        std::to_string(h) + " has a constant term)");
  const int prec = y.prec();
  if (q + 1 >= prec)
    throw PrecisionExhausted("solve_shifted_inverse: q = " + std::to_string(q) +
                             " needs precision > " + std::to_string(q + 1));
  const int out_prec = prec - 1;
  const int n_out = std::max(j + 1, y.max_log_degree());
  auto ycoef = [&](int h, int m) -> Rational {
    if (h > y.max_log_degree()) return Rational(0);
    return y.comp(h)[m];
  };
  std::vector<std::vector<Rational>> x(static_cast<std::size_t>(n_out + 1),
                                       std::vector<Rational>(static_cast<std::size_t>(out_prec)));
  // (a - (lambda+q)b).b^m.e_h = (m-q).b^(m+1).e_h + b^(m+1).e_(h-1)
  x[j + 1][q] = ycoef(j, q + 1);
  for (int h = j; h >= 0; --h) {
    for (int m = 0; m < out_prec; ++m) {
      if (m == q) {
        x[h][m] = h == 0 ? Rational(0) : ycoef(h - 1, q + 1);
        continue;
      }
      x[h][m] = (ycoef(h, m + 1) - x[h + 1][m]) / Rational(m - q);
    }
  }
  std::vector<TruncSeries> comps;
  for (auto& row : x) comps.emplace_back(std::move(row));
  return XiElement(y.lambda(), std::move(comps));
}

XiElement xi_quotient_drop_log0(const XiElement& x) {
  if (x.max_log_degree() < 1) throw InvalidArgument("quotient by Xi^(0) needs N >= 1");
  std::vector<TruncSeries> out(x.comps().begin() + 1, x.comps().end());
  return XiElement(x.lambda(), std::move(out));
}

std::string to_string(const XiElement& x) {
  std::ostringstream os;
  bool first = true;
  for (int j = x.max_log_degree(); j >= 0; --j) {
    const auto& c = x.comp(j);
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")*e" << j;
  }
  if (first) return "0";
  return os.str();
}

}  // namespace themelab
