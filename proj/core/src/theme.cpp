#include "themelab/theme.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "themelab/errors.hpp"
#include "themelab/linalg.hpp"

namespace themelab {

Rational FundamentalInvariants::lambda(int j) const {
  if (j < 1 || j > rank()) throw InvalidArgument("lambda index out of range");
  Rational l = lambda1;
  for (int i = 1; i < j; ++i) l += p[i - 1] - 1;
  return l;
}

std::vector<Rational> FundamentalInvariants::lambdas() const {
  std::vector<Rational> out;
  for (int j = 1; j <= rank(); ++j) out.push_back(lambda(j));
  return out;
}

FundamentalInvariants invariants_from_exponents(const std::vector<Rational>& mus) {
  if (mus.empty()) throw InvalidArgument("no exponents");
  FundamentalInvariants inv{mus.front(), {}};
  for (std::size_t j = 0; j + 1 < mus.size(); ++j) {
    const Rational d = mus[j + 1] - mus[j] + 1;
    if (!is_integer(d) || d < 0)
      throw InvalidArgument("exponents " + to_string(mus[j]) + ", " + to_string(mus[j + 1]) +
                            " do not give a non-negative integer p");
    inv.p.push_back(static_cast<int>(to_long(d)));
  }
  return inv;
}

std::string to_string(const FundamentalInvariants& inv) {
  std::ostringstream os;
  os << "lambda1 = " << to_string(inv.lambda1) << ", p = [";
  for (std::size_t i = 0; i < inv.p.size(); ++i) os << (i ? ", " : "") << inv.p[i];
  os << "]";
  return os.str();
}

std::string CanonicalSpace::shape() const {
  if (is_point()) return "point";
  std::vector<std::string> parts;
  if (punctured_dim == 1) parts.push_back("C*");
  if (punctured_dim > 1) parts.push_back("(C*)^" + std::to_string(punctured_dim));
  if (affine_dim == 1) parts.push_back("C");
  if (affine_dim > 1) parts.push_back("C^" + std::to_string(affine_dim));
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " x " + parts[i];
  return s;
}

CanonicalSpace canonical_space(const FundamentalInvariants& inv) {
  const int k = inv.rank();
  if (inv.lambda1 <= k - 1)
    throw InvalidArgument("canonical family needs lambda1 > k - 1 (lambda1 = " +
                          to_string(inv.lambda1) + ", k = " + std::to_string(k) + ")");
  for (int pj : inv.p)
    if (pj < 0) throw InvalidArgument("p_j must be non-negative");
  CanonicalSpace space{inv, {}, 0, 0};
  for (int j = 1; j < k; ++j) {
    SpaceFactor f;
    f.j = j;
    for (int m = 0; m < k - j; ++m) f.support.push_back(m);
    const int tail = std::accumulate(inv.p.begin() + (j - 1), inv.p.end(), 0);
    if (tail >= k - j) {
      int q = 0;
      for (int i = j; i < k; ++i) {
        q += inv.p[i - 1];
        if (q >= k - j) break;
      }
      f.q = q;
      f.support.push_back(q);
    }
    const int pj = inv.p[j - 1];
    if (pj >= 1) f.unit_power = pj;
    for (int m : f.support) {
      if (m == 0) continue;
      if (f.unit_power && m == *f.unit_power)
        ++space.punctured_dim;
      else
        ++space.affine_dim;
    }
    space.factors.push_back(std::move(f));
  }
  return space;
}

void validate(const CanonicalPoint& sigma) {
  const int k = sigma.invariants.rank();
  if (static_cast<int>(sigma.S.size()) != k - 1)
    throw InvalidCanonicalPoint("expected " + std::to_string(k - 1) + " relation series, got " +
                                std::to_string(sigma.S.size()));
  CanonicalSpace space;
  try {
    space = canonical_space(sigma.invariants);
  } catch (const InvalidArgument& e) {
    throw InvalidCanonicalPoint(e.what());
  }
  for (const auto& f : space.factors) {
    const auto& s = sigma.S[f.j - 1];
    const std::string name = "S_" + std::to_string(f.j);
    if (s[0] != 1) throw InvalidCanonicalPoint(name + "(0) must be 1");
    for (int m = 1; m < s.prec(); ++m)
      if (s[m] != 0 && std::find(f.support.begin(), f.support.end(), m) == f.support.end())
        throw InvalidCanonicalPoint(name + " has a b^" + std::to_string(m) +
                                    " term outside its allowed support");
    if (f.unit_power) {
      if (*f.unit_power >= s.prec())
        throw InvalidCanonicalPoint(name + " is not known up to b^" + std::to_string(*f.unit_power));
      if (s[*f.unit_power] == 0)
        throw InvalidCanonicalPoint("the b^" + std::to_string(*f.unit_power) + " coefficient of " +
                                    name + " must be non-zero");
    }
  }
}

ThemePresentation::ThemePresentation(FundamentalInvariants inv, std::vector<TruncSeries> relations,
                                     std::optional<int> prec)
    : inv_(std::move(inv)), relations_(std::move(relations)) {
  if (static_cast<int>(relations_.size()) != inv_.rank() - 1)
    throw InvalidArgument("a rank " + std::to_string(inv_.rank()) + " presentation needs " +
                          std::to_string(inv_.rank() - 1) + " relation series");
  for (int pj : inv_.p)
    if (pj < 0) throw InvalidArgument("p_j must be non-negative");
  prec_ = prec.value_or(kDefaultPrecision);
  if (!prec && !relations_.empty()) prec_ = relations_.front().prec();
  for (const auto& r : relations_) prec_ = std::min(prec_, r.prec());
  for (std::size_t j = 0; j < relations_.size(); ++j) {
    if (!relations_[j].is_unit())
      throw InvalidArgument("relation series R_" + std::to_string(j + 1) + " must be a unit");
    relations_[j] = relations_[j].truncated(prec_);
  }
}

ThemeElement ThemeElement::zero(int rank, int prec) {
  return ThemeElement{std::vector<TruncSeries>(static_cast<std::size_t>(rank), TruncSeries(prec))};
}

ThemeElement ThemeElement::basis(int rank, int prec, int j, const TruncSeries& coeff) {
  ThemeElement x = zero(rank, prec);
  x.comps.at(static_cast<std::size_t>(j - 1)) = coeff.truncated(std::min(prec, coeff.prec()));
  return x;
}

int ThemeElement::prec() const {
  int p = comps.empty() ? kDefaultPrecision : comps.front().prec();
  for (const auto& c : comps) p = std::min(p, c.prec());
  return p;
}

int ThemeElement::level() const {
  for (int j = rank(); j >= 1; --j)
    if (!comps[j - 1].is_zero()) return j;
  return 0;
}

ThemeElement& ThemeElement::operator+=(const ThemeElement& other) {
  if (rank() != other.rank()) throw InvalidArgument("theme elements of different rank");
  for (std::size_t i = 0; i < comps.size(); ++i) comps[i] += other.comps[i];
  return *this;
}

ThemeElement& ThemeElement::operator-=(const ThemeElement& other) {
  if (rank() != other.rank()) throw InvalidArgument("theme elements of different rank");
  for (std::size_t i = 0; i < comps.size(); ++i) comps[i] -= other.comps[i];
  return *this;
}

bool operator==(const ThemeElement& x, const ThemeElement& y) {
  if (x.rank() != y.rank()) return false;
  for (std::size_t i = 0; i < x.comps.size(); ++i)
    if (!(x.comps[i] == y.comps[i])) return false;
  return true;
}

ThemeElement operator+(ThemeElement x, const ThemeElement& y) { return x += y; }
ThemeElement operator-(ThemeElement x, const ThemeElement& y) { return x -= y; }

ThemeElement operator*(const TruncSeries& s, const ThemeElement& x) {
  ThemeElement r;
  for (const auto& c : x.comps) r.comps.push_back(s * c);
  return r;
}

namespace {

std::optional<int> single_term(const TruncSeries& s) {
  std::optional<int> at;
  for (int m = 0; m < s.prec(); ++m)
    if (s[m] != 0) {
      if (at) return std::nullopt;
      at = m;
    }
  return at;
}

}  // namespace

std::string to_string(const ThemeElement& x) {
  std::ostringstream os;
  bool first = true;
  for (int j = x.rank(); j >= 1; --j) {
    const auto& c = x.component(j);
    if (c.is_zero()) continue;
    const auto m = single_term(c);
    if (!m) {
      os << (first ? "" : " + ") << "(" << to_string(c) << ")*e" << j;
      first = false;
      continue;
    }
    const Rational coef = c[*m];
    const Rational mag = coef < 0 ? Rational(-coef) : coef;
    if (first)
      os << (coef < 0 ? "-" : "");
    else
      os << (coef < 0 ? " - " : " + ");
    first = false;
    if (*m == 0) {
      if (mag != 1) os << to_string(mag) << "*";
    } else {
      if (mag != 1) os << to_string(mag) << "*";
      os << "b";
      if (*m > 1) os << "^" << *m;
      os << "*";
    }
    os << "e" << j;
  }
  if (first) return "0";
  return os.str();
}

ThemeElement theme_a_apply(const ThemePresentation& e, const ThemeElement& x) {
  const int k = e.rank();
  if (x.rank() != k) throw InvalidArgument("element rank does not match the presentation");
  const int prec = std::min(x.prec(), e.prec());
  ThemeElement out = ThemeElement::zero(k, prec);
  for (int j = 1; j <= k; ++j) {
    const auto& u = x.component(j);
    if (u.is_zero()) continue;
    out.comps[j - 1] += u.shift_up(1) * e.lambda(j) + u.b2_derivative();
    if (j >= 2) out.comps[j - 2] += u * e.relation(j - 1);
  }
  for (auto& c : out.comps) c = c.truncated(std::min(c.prec(), prec));
  return out;
}

OreOperator defining_operator(const ThemePresentation& e) {
  const int prec = e.prec();
  OreOperator op = OreOperator::linear(e.lambda(1), prec);
  for (int j = 1; j < e.rank(); ++j)
    op = ore_mul(ore_mul(op, OreOperator::scalar(e.relation(j).inverse())),
                 OreOperator::linear(e.lambda(j + 1), prec));
  return op;
}

ThemeElement apply_operator(const ThemePresentation& e, const OreOperator& op, const ThemeElement& x) {
  return ore_apply(op, x, [&](const ThemeElement& y) { return theme_a_apply(e, y); });
}

BuiltTheme build_theme(const CanonicalPoint& sigma, int prec) {
  validate(sigma);
  std::vector<TruncSeries> rel;
  for (const auto& s : sigma.S) rel.push_back(s.truncated(std::min(prec, s.prec())));
  ThemePresentation e(sigma.invariants, std::move(rel), prec);
  OreOperator p = defining_operator(e);
  return BuiltTheme{std::move(e), std::move(p)};
}

ThemePresentation subtheme_F(int j, const ThemePresentation& e) {
  if (j < 1 || j > e.rank()) throw InvalidArgument("subtheme_F: j out of range");
  FundamentalInvariants inv{e.invariants().lambda1,
                            std::vector<int>(e.invariants().p.begin(), e.invariants().p.begin() + (j - 1))};
  std::vector<TruncSeries> rel(e.relations().begin(), e.relations().begin() + (j - 1));
  return ThemePresentation(std::move(inv), std::move(rel), e.prec());
}

ThemePresentation quotient_theme(int j, const ThemePresentation& e) {
  if (j < 0 || j >= e.rank()) throw InvalidArgument("quotient_theme: j out of range");
  FundamentalInvariants inv{e.lambda(j + 1),
                            std::vector<int>(e.invariants().p.begin() + j, e.invariants().p.end())};
  std::vector<TruncSeries> rel(e.relations().begin() + j, e.relations().end());
  return ThemePresentation(std::move(inv), std::move(rel), e.prec());
}

XiElement embed_into_xi(const ThemePresentation& e) {
  const int k = e.rank();
  const Rational lambda = class_representative(e.lambda(1));
  if (e.lambda(1) < lambda)
    throw InvalidArgument("embed_into_xi: lambda1 must be positive");
  XiElement eps = power_monomial(e.lambda(1), 0, lambda, k - 1, e.prec());
  for (int i = 1; i < k; ++i) {
    const Rational shift = e.lambda(i + 1) - lambda;
    if (shift < 0)
      throw NotSolvable("embed_into_xi: lambda_" + std::to_string(i + 1) + " is not positive");
    const int q = static_cast<int>(to_long(shift));
    const XiElement y = e.relation(i) * eps;
    XiElement next = solve_shifted_inverse(y, q, i - 1);
    if (next.comp(i)[q] == 0)
      throw WrongInvariants("embed_into_xi: the leading coefficient vanishes at stage " +
                            std::to_string(i + 1) + "; R_" + std::to_string(i) +
                            " has no b^p_" + std::to_string(i) + " term");
    eps = next.with_log_bound(k - 1);
  }
  return eps;
}

BernsteinData bernstein_from_generator(const XiElement& phi, int k) {
  if (k < 1) throw InvalidArgument("bernstein_from_generator: k must be >= 1");
  const int rows = phi.max_log_degree() + 1;
  if (rows < k)
    throw NotThematic("an element of Xi^(" + std::to_string(rows - 1) + ") has rank at most " +
                      std::to_string(rows));
  std::vector<XiElement> it{phi};
  for (int i = 1; i <= k; ++i) it.push_back(a_apply(it.back()));

  // choose the k rows whose minor has the least valuation
  std::vector<int> best_rows;
  std::optional<int> best_val;
  std::vector<int> sel(static_cast<std::size_t>(k));
  std::iota(sel.begin(), sel.end(), 0);
  while (true) {
    SeriesMatrix m;
    for (int r : sel) {
      std::vector<TruncSeries> row;
      for (int c = 0; c < k; ++c) row.push_back(it[c].comp(r));
      m.push_back(std::move(row));
    }
    const auto v = series_det(m).valuation();
    if (v && (!best_val || *v < *best_val)) {
      best_val = v;
      best_rows = sel;
    }
    int i = k - 1;
    while (i >= 0 && sel[i] == rows - k + i) --i;
    if (i < 0) break;
    ++sel[i];
    for (int j = i + 1; j < k; ++j) sel[j] = sel[j - 1] + 1;
  }
  if (!best_val)
    throw NotThematic("phi, a.phi, ..., a^" + std::to_string(k - 1) +
                      ".phi are dependent to the working precision");
  SeriesMatrix m;
  std::vector<TruncSeries> rhs;
  for (int r : best_rows) {
    std::vector<TruncSeries> row;
    for (int c = 0; c < k; ++c) row.push_back(it[c].comp(r));
    m.push_back(std::move(row));
    rhs.push_back(it[k].comp(r));
  }
  const CramerResult sol = cramer_solve(m, rhs);
  if (sol.status == CramerResult::Status::NotIntegral)
    throw NotThematic("a^" + std::to_string(k) + ".phi is not a C[[b]]-combination of lower iterates");
  if (sol.status != CramerResult::Status::Ok) throw NotThematic("singular system");
  // residual on every row
  for (int r = 0; r < rows; ++r) {
    TruncSeries acc = it[k].comp(r);
    for (int c = 0; c < k; ++c) acc -= sol.x[c] * it[c].comp(r);
    if (!acc.is_zero())
      throw NotThematic("a^" + std::to_string(k) + ".phi leaves the span of the lower iterates");
  }
  BernsteinData out;
  out.S = sol.x;
  out.det_valuation = *best_val;
  std::vector<Rational> coeffs(static_cast<std::size_t>(k + 1));
  coeffs[k] = 1;
  for (int j = 0; j < k; ++j) {
    if (k - j >= out.S[j].prec())
      throw PrecisionExhausted("bernstein_from_generator: b^" + std::to_string(k - j) +
                               " coefficient of S_" + std::to_string(j) + " is beyond the precision");
    coeffs[j] = -out.S[j][k - j];
  }
  out.element = HomogeneousOperator(std::move(coeffs));
  return out;
}

FundamentalInvariants invariants_from_bernstein(const HomogeneousOperator& element,
                                                const Rational& lambda_class) {
  return invariants_from_exponents(factor_homogeneous(element, lambda_class));
}

}  // namespace themelab
