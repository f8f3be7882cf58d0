#pragma once

#include <optional>
#include <string>
#include <vector>

#include "themelab/ore_operator.hpp"
#include "themelab/xi_module.hpp"

namespace themelab {

/// lambda_1 and p_1..p_{k-1}; lambda_{j+1} = lambda_j + p_j - 1.
struct FundamentalInvariants {
  Rational lambda1;
  std::vector<int> p;

  int rank() const { return static_cast<int>(p.size()) + 1; }
  /// lambda_j for 1 <= j <= rank().
  Rational lambda(int j) const;
  std::vector<Rational> lambdas() const;

  friend bool operator==(const FundamentalInvariants&, const FundamentalInvariants&) = default;
};

/// Inverse of lambdas(): requires mu_{j+1} - mu_j + 1 to be a
/// non-negative integer.
FundamentalInvariants invariants_from_exponents(const std::vector<Rational>& mus);

/// "lambda1 = 7/2, p = [3, 2, 2]"
std::string to_string(const FundamentalInvariants& inv);

/// Monomials allowed in S_j and which of them must be non-zero.
struct SpaceFactor {
  int j = 0;
  std::vector<int> support;     // exponents of b, always starting with 0
  std::optional<int> q;         // the extra exponent q_j when present
  std::optional<int> unit_power;  // p_j when p_j >= 1 (coefficient in C*)
};

struct CanonicalSpace {
  FundamentalInvariants invariants;
  std::vector<SpaceFactor> factors;  // j = 1..k-1
  int affine_dim = 0;     // factors of C
  int punctured_dim = 0;  // factors of C*

  bool is_point() const { return affine_dim == 0 && punctured_dim == 0; }
  /// "point", "C*", "(C*)^2 x C", ...
  std::string shape() const;
};

/// Parameter space of the canonical family; requires lambda_1 > k - 1.
CanonicalSpace canonical_space(const FundamentalInvariants& inv);

/// sigma = (S_1, ..., S_{k-1}).
struct CanonicalPoint {
  FundamentalInvariants invariants;
  std::vector<TruncSeries> S;
};

/// Throws InvalidCanonicalPoint unless every S_j lies in W_j.
void validate(const CanonicalPoint& sigma);

/// Theme given by generators e_1..e_k and the relations
///   (a - lambda_1 b) e_1 = 0,  (a - lambda_{j+1} b) e_{j+1} = R_j e_j.
class ThemePresentation {
 public:
  /// Every R_j must be a unit; there must be k - 1 of them. The precision
  /// is the smallest relation precision, capped by `prec` when given.
  ThemePresentation(FundamentalInvariants inv, std::vector<TruncSeries> relations,
                    std::optional<int> prec = std::nullopt);

  const FundamentalInvariants& invariants() const { return inv_; }
  int rank() const { return inv_.rank(); }
  Rational lambda(int j) const { return inv_.lambda(j); }
  /// R_j for 1 <= j <= k - 1.
  const TruncSeries& relation(int j) const { return relations_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<TruncSeries>& relations() const { return relations_; }
  int prec() const { return prec_; }

 private:
  FundamentalInvariants inv_;
  std::vector<TruncSeries> relations_;
  int prec_;
};

/// x = sum_j U_j(b) e_j in a presentation of rank k.
struct ThemeElement {
  std::vector<TruncSeries> comps;  // comps[j-1] = U_j

  static ThemeElement zero(int rank, int prec);
  static ThemeElement basis(int rank, int prec, int j, const TruncSeries& coeff);

  int rank() const { return static_cast<int>(comps.size()); }
  int prec() const;
  const TruncSeries& component(int j) const { return comps.at(static_cast<std::size_t>(j - 1)); }
  /// Largest j with U_j non-zero, 0 for the zero element.
  int level() const;
  bool is_zero() const { return level() == 0; }

  ThemeElement& operator+=(const ThemeElement& other);
  ThemeElement& operator-=(const ThemeElement& other);
  friend bool operator==(const ThemeElement& x, const ThemeElement& y);
};

ThemeElement operator+(ThemeElement x, const ThemeElement& y);
ThemeElement operator-(ThemeElement x, const ThemeElement& y);
ThemeElement operator*(const TruncSeries& s, const ThemeElement& x);

/// "e2 - 5*b*e1"
std::string to_string(const ThemeElement& x);

/// a.x using the relations; precision is kept.
ThemeElement theme_a_apply(const ThemePresentation& e, const ThemeElement& x);

/// (a - lambda_1 b) R_1^{-1} (a - lambda_2 b) ... R_{k-1}^{-1} (a - lambda_k b),
/// which annihilates e_k.
OreOperator defining_operator(const ThemePresentation& e);

/// P.x inside the presentation.
ThemeElement apply_operator(const ThemePresentation& e, const OreOperator& op, const ThemeElement& x);

struct BuiltTheme {
  ThemePresentation presentation;
  OreOperator P;
};

/// E(sigma) with R_j = S_j, and P(sigma).
BuiltTheme build_theme(const CanonicalPoint& sigma, int prec);

/// The normal sub-theme F_j spanned by e_1..e_j (1 <= j <= k).
ThemePresentation subtheme_F(int j, const ThemePresentation& e);
/// E/F_j on the classes of e_{j+1}..e_k (0 <= j < k).
ThemePresentation quotient_theme(int j, const ThemePresentation& e);

/// A generator phi in Xi_lambda^(k-1) with A.phi isomorphic to E, phi
/// corresponding to e_k. Built from the seed s^(lambda_1 - 1) by one
/// solve_shifted_inverse per relation; the result has precision
/// prec(E) - (k - 1). Throws PrecisionExhausted when a needed coefficient
/// lies beyond the precision and WrongInvariants when a leading
/// coefficient vanishes.
XiElement embed_into_xi(const ThemePresentation& e);

struct BernsteinData {
  /// a^k.phi = sum_{j<k} S[j].a^j.phi
  std::vector<TruncSeries> S;
  /// a^k - sum_j sigma_j b^(k-j) a^j, sigma_j the b^(k-j) coefficient of S_j.
  HomogeneousOperator element;
  /// Valuation of the minor used for the Cramer solve.
  int det_valuation = 0;
};

/// Throws NotThematic when phi, a.phi, ..., a^(k-1).phi do not form a
/// C[[b]]-basis of A.phi to the working precision.
BernsteinData bernstein_from_generator(const XiElement& phi, int k);

/// Factor exponents of the Bernstein element turned into invariants.
FundamentalInvariants invariants_from_bernstein(const HomogeneousOperator& element,
                                                const Rational& lambda_class);

}  // namespace themelab
