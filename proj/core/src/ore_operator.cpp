#include "themelab/ore_operator.hpp"

#include <algorithm>
#include <sstream>

#include "themelab/errors.hpp"

namespace themelab {

OreOperator::OreOperator(int prec) : coeffs_{TruncSeries(prec)}, prec_(prec) {}

OreOperator::OreOperator(std::vector<TruncSeries> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("operator needs at least one coefficient");
  prec_ = coeffs_.front().prec();
  for (const auto& c : coeffs_) prec_ = std::min(prec_, c.prec());
  normalize();
}

void OreOperator::normalize() {
  for (auto& c : coeffs_)
    if (c.prec() > prec_) c = c.truncated(prec_);
  while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
}

OreOperator OreOperator::scalar(const TruncSeries& s) { return OreOperator({s}); }

OreOperator OreOperator::a(int prec) {
  return OreOperator({TruncSeries(prec), TruncSeries::one(prec)});
}

OreOperator OreOperator::b(int prec) {
  return OreOperator({TruncSeries::monomial(Rational(1), 1, prec)});
}

OreOperator OreOperator::linear(const Rational& mu, int prec) {
  return OreOperator({TruncSeries::monomial(Rational(-mu), 1, prec), TruncSeries::one(prec)});
}

int OreOperator::degree() const {
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i)
    if (!coeffs_[i].is_zero()) return i;
  return -1;
}

TruncSeries OreOperator::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return TruncSeries(prec_);
  return coeffs_[i];
}

OreOperator& OreOperator::operator+=(const OreOperator& other) {
  const std::size_t n = std::max(coeffs_.size(), other.coeffs_.size());
  std::vector<TruncSeries> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(coeff(static_cast<int>(i)) + other.coeff(static_cast<int>(i)));
  *this = OreOperator(std::move(out));
  return *this;
}

OreOperator& OreOperator::operator-=(const OreOperator& other) {
  const std::size_t n = std::max(coeffs_.size(), other.coeffs_.size());
  std::vector<TruncSeries> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(coeff(static_cast<int>(i)) - other.coeff(static_cast<int>(i)));
  *this = OreOperator(std::move(out));
  return *this;
}

bool operator==(const OreOperator& x, const OreOperator& y) {
  const int n = std::max(x.degree(), y.degree());
  for (int i = 0; i <= n; ++i)
    if (!(x.coeff(i) == y.coeff(i))) return false;
  return true;
}

OreOperator operator+(OreOperator x, const OreOperator& y) { return x += y; }
OreOperator operator-(OreOperator x, const OreOperator& y) { return x -= y; }

OreOperator ore_mul(const OreOperator& lhs, const OreOperator& rhs) {
  const int prec = std::min(lhs.prec(), rhs.prec());
  const int dl = std::max(lhs.degree(), 0);
  const int dr = std::max(rhs.degree(), 0);
  std::vector<TruncSeries> out(static_cast<std::size_t>(dl + dr + 1), TruncSeries(prec));

  // binomials up to dl
  std::vector<std::vector<Integer>> binom(static_cast<std::size_t>(dl + 1));
  for (int i = 0; i <= dl; ++i) {
    binom[i].assign(static_cast<std::size_t>(i + 1), Integer(1));
    for (int m = 1; m < i; ++m) binom[i][m] = binom[i - 1][m - 1] + binom[i - 1][m];
  }

  for (int j = 0; j <= dr; ++j) {
    // a^i.d = sum_m C(i,m) delta^m(d) a^(i-m), delta = b^2 d/db.
    std::vector<TruncSeries> deltas;
    deltas.reserve(static_cast<std::size_t>(dl + 1));
    deltas.push_back(rhs.coeff(j).truncated(prec));
    for (int m = 1; m <= dl; ++m) deltas.push_back(deltas.back().b2_derivative());
    for (int i = 0; i <= dl; ++i) {
      const TruncSeries ci = lhs.coeff(i).truncated(prec);
      if (ci.is_zero()) continue;
      for (int m = 0; m <= i; ++m) {
        if (deltas[m].is_zero()) continue;
        out[i - m + j] += ci * (deltas[m] * Rational(binom[i][m]));
      }
    }
  }
  return OreOperator(std::move(out));
}

std::string to_string(const OreOperator& op) {
  std::ostringstream os;
  bool first = true;
  for (int i = op.degree(); i >= 0; --i) {
    const auto c = op.coeff(i);
    const auto v = c.valuation();
    if (!v) continue;
    const std::string ap = i == 0 ? "" : (i == 1 ? "a" : "a^" + std::to_string(i));
    bool single = true;
    for (int m = *v + 1; m < c.prec(); ++m)
      if (c[m] != 0) single = false;
    if (!single) {
      os << (first ? "" : " + ") << "(" << to_string(c) << ")" << (ap.empty() ? "" : "*" + ap);
      first = false;
      continue;
    }
    const Rational coef = c[*v];
    const Rational mag = coef < 0 ? Rational(-coef) : coef;
    if (first)
      os << (coef < 0 ? "-" : "");
    else
      os << (coef < 0 ? " - " : " + ");
    first = false;
    std::vector<std::string> parts;
    if (mag != 1 || (*v == 0 && ap.empty())) parts.push_back(to_string(mag));
    if (*v == 1) parts.push_back("b");
    if (*v > 1) parts.push_back("b^" + std::to_string(*v));
    if (!ap.empty()) parts.push_back(ap);
    for (std::size_t k = 0; k < parts.size(); ++k) os << (k ? "*" : "") << parts[k];
  }
  if (first) return "0";
  return os.str();
}

namespace {

OreOperator eval_operator(const expr::Node& node, int prec, const ParameterMap& params) {
  using K = expr::Node::Kind;
  switch (node.kind) {
    case K::Number:
      return OreOperator::scalar(TruncSeries::constant(node.number, prec));
    case K::Ident:
      if (node.name == "a") return OreOperator::a(prec);
      if (node.name == "b") return OreOperator::b(prec);
      return OreOperator::scalar(TruncSeries::constant(expr::evaluate_scalar(node, params), prec));
    case K::Neg:
      return OreOperator(prec) - eval_operator(*node.children[0], prec, params);
    case K::Add:
      return eval_operator(*node.children[0], prec, params) +
             eval_operator(*node.children[1], prec, params);
    case K::Sub:
      return eval_operator(*node.children[0], prec, params) -
             eval_operator(*node.children[1], prec, params);
    case K::Mul:
      return ore_mul(eval_operator(*node.children[0], prec, params),
                     eval_operator(*node.children[1], prec, params));
    case K::Div: {
      const auto den = eval_operator(*node.children[1], prec, params);
      if (den.degree() > 0) throw ParseError("cannot divide by an operator involving a");
      return ore_mul(eval_operator(*node.children[0], prec, params),
                     OreOperator::scalar(den.coeff(0).inverse()));
    }
    case K::Pow: {
      const Rational e = expr::evaluate_scalar(*node.children[1], params);
      if (!is_integer(e) || e < 0) throw ParseError("operator powers must be non-negative integers");
      const auto base = eval_operator(*node.children[0], prec, params);
      auto r = OreOperator::scalar(TruncSeries::one(prec));
      for (long i = 0; i < to_long(e); ++i) r = ore_mul(r, base);
      return r;
    }
    case K::Call: {
      if (node.name == "inv" && node.children.size() == 1) {
        const auto inner = eval_operator(*node.children[0], prec, params);
        if (inner.degree() > 0) throw ParseError("inv() needs a series argument");
        return OreOperator::scalar(inner.coeff(0).inverse());
      }
      throw ParseError("unknown function '" + node.name + "' in operator literal");
    }
  }
  throw ParseError("bad operator expression");
}

// (i!/j!) for i >= j.
Integer falling_ratio(int i, int j) {
  Integer r = 1;
  for (int t = j + 1; t <= i; ++t) r *= t;
  return r;
}

// Q (degree k-1) times (a - mu.b), via a^i.b = sum_m i!/(i-m)! b^(m+1) a^(i-m).
std::vector<Rational> times_linear(const std::vector<Rational>& q, const Rational& mu) {
  const int k = static_cast<int>(q.size());
  std::vector<Rational> c(static_cast<std::size_t>(k + 1), Rational(0));
  for (int j = 0; j <= k; ++j) {
    Rational acc = j >= 1 ? q[j - 1] : Rational(0);
    Rational tail = 0;
    for (int i = j; i <= k - 1; ++i) tail += q[i] * Rational(falling_ratio(i, j));
    c[j] = acc - mu * tail;
  }
  return c;
}

std::vector<Rational> poly_mul_linear(const std::vector<Rational>& p, const Rational& shift) {
  // p(x) * (x + shift)
  std::vector<Rational> out(p.size() + 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] += p[i] * shift;
    out[i + 1] += p[i];
  }
  return out;
}

// r(mu) = sum_j c_j mu (mu+1) ... (mu+j-1): the remainder of right division
// as a polynomial in mu, monomial basis, constant term first.
std::vector<Rational> remainder_polynomial(const HomogeneousOperator& p) {
  std::vector<Rational> out(static_cast<std::size_t>(p.degree() + 1), Rational(0));
  std::vector<Rational> rising{Rational(1)};
  for (int j = 0; j <= p.degree(); ++j) {
    for (std::size_t t = 0; t < rising.size(); ++t) out[t] += p.coeff(j) * rising[t];
    rising = poly_mul_linear(rising, Rational(j));
  }
  return out;
}

void factor_search(const HomogeneousOperator& p, const Rational& lambda_class,
                   std::vector<Rational>& suffix, std::vector<std::vector<Rational>>& found) {
  const int k = p.degree();
  if (k == 0) {
    std::vector<Rational> mus(suffix.rbegin(), suffix.rend());
    for (std::size_t j = 1; j < mus.size(); ++j)
      if (mus[j] + 1 < mus[j - 1]) return;  // mu_j + j must be non-decreasing
    found.push_back(std::move(mus));
    return;
  }
  const auto r = remainder_polynomial(p);
  const Rational lead = r.back();
  if (lead == 0) throw FactorizationFailed("degenerate remainder polynomial");
  Rational bound = 0;
  for (int t = 0; t < k; ++t) bound = std::max(bound, Rational(abs(r[t] / lead)));
  bound += 1;
  constexpr long kMaxCandidates = 200000;
  const Rational span = bound + 2;
  mpz_class top;
  mpz_fdiv_q(top.get_mpz_t(), span.get_num_mpz_t(), span.get_den_mpz_t());
  if (top > kMaxCandidates) throw FactorizationFailed("root bound too large to search");
  const long n = top.get_si();
  for (long shift = -n; shift <= n; ++shift) {
    const Rational mu = lambda_class + shift;
    const auto div = right_divide(p, mu);
    if (div.remainder != 0) continue;
    suffix.push_back(mu);
    factor_search(div.quotient, lambda_class, suffix, found);
    suffix.pop_back();
  }
}

}  // namespace

OreOperator parse_operator(std::string_view text, int prec, const ParameterMap& params) {
  const auto tree = expr::parse(text);
  return eval_operator(*tree, prec, params);
}

HomogeneousOperator::HomogeneousOperator(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("homogeneous operator needs a coefficient");
}

HomogeneousOperator HomogeneousOperator::from_factors(const std::vector<Rational>& mus) {
  std::vector<Rational> c{Rational(1)};
  for (const auto& mu : mus) c = times_linear(c, mu);
  return HomogeneousOperator(std::move(c));
}

OreOperator HomogeneousOperator::to_ore(int prec) const {
  const int k = degree();
  std::vector<TruncSeries> out;
  out.reserve(coeffs_.size());
  for (int j = 0; j <= k; ++j) out.push_back(TruncSeries::monomial(coeffs_[j], k - j, prec));
  return OreOperator(std::move(out));
}

std::string to_string(const HomogeneousOperator& op) {
  std::ostringstream os;
  const int k = op.degree();
  bool first = true;
  for (int j = k; j >= 0; --j) {
    const Rational& c = op.coeff(j);
    if (c == 0) continue;
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::string mono;
    const int bp = k - j;
    if (bp > 0) mono += bp == 1 ? "b" : "b^" + std::to_string(bp);
    if (j > 0) {
      if (!mono.empty()) mono += "*";
      mono += j == 1 ? "a" : "a^" + std::to_string(j);
    }
    if (mono.empty()) {
      os << to_string(mag);
    } else {
      if (mag != 1) os << to_string(mag) << "*";
      os << mono;
    }
  }
  if (first) return "0";
  return os.str();
}

RightDivision right_divide(const HomogeneousOperator& p, const Rational& mu) {
  const int k = p.degree();
  if (k < 1) throw InvalidArgument("right_divide needs degree >= 1");
  std::vector<Rational> q(static_cast<std::size_t>(k), Rational(0));
  for (int j = k; j >= 1; --j) {
    Rational tail = 0;
    for (int i = j; i <= k - 1; ++i) tail += q[i] * Rational(falling_ratio(i, j));
    q[j - 1] = p.coeff(j) + mu * tail;
  }
  Rational tail = 0;
  for (int i = 0; i <= k - 1; ++i) tail += q[i] * Rational(falling_ratio(i, 0));
  return {HomogeneousOperator(std::move(q)), p.coeff(0) + mu * tail};
}

std::vector<Rational> factor_homogeneous(const HomogeneousOperator& p, const Rational& lambda_class) {
  if (!p.is_monic()) throw FactorizationFailed("factor_homogeneous expects a monic operator");
  std::vector<Rational> suffix;
  std::vector<std::vector<Rational>> found;
  factor_search(p, lambda_class, suffix, found);
  if (found.empty())
    throw FactorizationFailed("no factorization with exponents in " + to_string(lambda_class) +
                              " + Z and non-decreasing mu_j + j for " + to_string(p));
  return *std::min_element(found.begin(), found.end());
}

std::vector<Rational> bernstein_polynomial(const std::vector<Rational>& mus) {
  std::vector<Rational> poly{Rational(1)};
  for (const auto& mu : mus) poly = poly_mul_linear(poly, mu);
  return poly;
}

}  // namespace themelab
