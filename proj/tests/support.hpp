#pragma once

#include <random>
#include <string>
#include <vector>

#include "themelab/classify.hpp"
#include "themelab/errors.hpp"
#include "themelab/linalg.hpp"
#include "themelab/theme.hpp"

namespace testsupport {

using namespace themelab;

inline Rational q(long n, long d = 1) { return make_rational(n, d); }

inline TruncSeries S(const std::string& text, int prec = 32) { return parse_series(text, prec); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  Rational rational(long span = 5) {
    return make_rational(integer(-span, span), integer(1, 4));
  }
  Rational nonzero(long span = 5) {
    for (;;) {
      Rational r = rational(span);
      if (r != 0) return r;
    }
  }
  TruncSeries series(int prec, int terms = 6) {
    TruncSeries s(prec);
    for (int m = 0; m < std::min(terms, prec); ++m) s.set(m, rational());
    return s;
  }
  TruncSeries unit(int prec, int terms = 6) {
    TruncSeries s = series(prec, terms);
    s.set(0, nonzero());
    return s;
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// E(alpha, beta, gamma): lambda1 = 5/2, p = (1,1),
/// (a - l3 b) e3 = (1 + alpha b) e2, (a - l2 b) e2 = (1 + beta b + gamma b^2) e1.
inline ThemePresentation rank3(const Rational& alpha, const Rational& beta, const Rational& gamma,
                               int prec = 32) {
  FundamentalInvariants inv{q(5, 2), {1, 1}};
  TruncSeries s1 = TruncSeries::one(prec) + TruncSeries::monomial(beta, 1, prec) + TruncSeries::monomial(gamma, 2, prec);
  TruncSeries s2 = TruncSeries::one(prec) + TruncSeries::monomial(alpha, 1, prec);
  return ThemePresentation(inv, {s1, s2}, prec);
}

/// The rank-4 family with lambda1 = 7/2, p = (3,2,2).
struct Rank4Data {
  Rational alpha, beta, gamma, delta, epsilon, theta;
};

inline ThemePresentation rank4(const Rank4Data& d, int prec = 32) {
  FundamentalInvariants inv{q(7, 2), {3, 2, 2}};
  auto m = [&](const Rational& c, int k) { return TruncSeries::monomial(c, k, prec); };
  const TruncSeries one = TruncSeries::one(prec);
  return ThemePresentation(inv,
                           {one + m(d.delta, 1) + m(d.epsilon, 2) + m(d.theta, 3),
                            one + m(d.beta, 1) + m(d.gamma, 2), one + m(d.alpha, 2)},
                           prec);
}

inline XiElement apply_xi(const OreOperator& P, const XiElement& x) {
  return ore_apply(P, x, [](const XiElement& y) { return a_apply(y); });
}

inline bool all_zero(const ThemeElement& x) {
  for (const auto& c : x.comps)
    if (!c.is_zero()) return false;
  return true;
}

/// b-linear operator image of every unknown coefficient b^m e_j (j <= level,
/// m < n), as rows of equations "coefficient of b^r e_i", r < n.
inline Matrix operator_matrix(const ThemePresentation& e, const OreOperator& op, int level, int n) {
  const int k = e.rank();
  Matrix mat(k * n, level * n);
  for (int j = 1; j <= level; ++j)
    for (int m = 0; m < n; ++m) {
      const ThemeElement x = ThemeElement::basis(k, e.prec(), j, TruncSeries::monomial(Rational(1), m, e.prec()));
      const ThemeElement y = apply_operator(e, op, x);
      for (int i = 1; i <= k; ++i)
        for (int r = 0; r < n; ++r) mat((i - 1) * n + r, (j - 1) * n + m) = y.component(i)[r];
    }
  return mat;
}

/// Brute-force invariance: is there x in F_{k-1} with P.x = 0 mod b^n
/// whose e_{k-1} coefficient is non-zero below b^low?
inline bool brute_force_invariant(const ThemePresentation& e, int n = 16, int low = 4) {
  const int k = e.rank();
  const Matrix mat = operator_matrix(e, defining_operator(e), k - 1, n);
  for (const auto& v : nullspace(mat))
    for (int m = 0; m < low; ++m)
      if (v[static_cast<std::size_t>((k - 2) * n + m)] != 0) return true;
  return false;
}

/// Brute-force isomorphism: some eps = sum_{i<=k} W_i e_i in e with
/// P'.eps = 0 mod b^n and W_k(0) = 1, P' the operator of `target`.
/// Returns the constant terms of W_1..W_k of one solution.
inline std::optional<std::vector<Rational>> brute_force_isomorphic(const ThemePresentation& e,
                                                                   const ThemePresentation& target, int n = 16) {
  const int k = e.rank();
  const OreOperator op = defining_operator(target);
  const Matrix mat = operator_matrix(e, op, k, n);
  Matrix aug(mat.rows() + 1, mat.cols());
  std::vector<Rational> rhs(static_cast<std::size_t>(mat.rows() + 1));
  for (int r = 0; r < mat.rows(); ++r)
    for (int c = 0; c < mat.cols(); ++c) aug(r, c) = mat(r, c);
  aug(mat.rows(), (k - 1) * n) = 1;
  rhs.back() = 1;
  const auto sol = solve(aug, rhs);
  if (!sol) return std::nullopt;
  std::vector<Rational> constants;
  for (int j = 0; j < k; ++j) constants.push_back((*sol)[static_cast<std::size_t>(j * n)]);
  return constants;
}

/// Relations of `target` checked on eps_1..eps_k inside e.
inline bool witness_satisfies(const ThemePresentation& e, const ThemePresentation& target,
                              const std::vector<ThemeElement>& eps) {
  const int k = e.rank();
  for (int j = 1; j <= k; ++j) {
    const ThemeElement& x = eps[static_cast<std::size_t>(j - 1)];
    ThemeElement r = theme_a_apply(e, x) - TruncSeries::monomial(target.lambda(j), 1, x.prec()) * x;
    if (j > 1) r -= target.relation(j - 1) * eps[static_cast<std::size_t>(j - 2)];
    if (!all_zero(r)) return false;
  }
  return true;
}

/// A pseudo-random point of the canonical space of inv.
inline CanonicalPoint random_canonical_point(Rng& rng, const FundamentalInvariants& inv, int prec) {
  const CanonicalSpace cs = canonical_space(inv);
  CanonicalPoint pt{inv, {}};
  for (const auto& f : cs.factors) {
    TruncSeries s = TruncSeries::one(prec);
    for (int m : f.support) {
      if (m == 0) continue;
      const Rational c = (f.unit_power && *f.unit_power == m) ? rng.nonzero() : rng.rational();
      s.set(m, c);
    }
    pt.S.push_back(s);
  }
  return pt;
}

}  // namespace testsupport
