#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "themelab/param_series.hpp"
#include "themelab/theme.hpp"
#include "themelab/xi_expr.hpp"

namespace themelab {

/// Rank of A.x: `lower` is certified by a minor that is non-zero below the
/// precision; `upper` holds only to the working precision unless
/// `upper_certified`.
struct RankCertificate {
  int lower = 0;
  int upper = 0;
  bool upper_certified = false;
  /// minor_valuations[r-1]: least valuation of an r x r minor of
  /// (x, a.x, ..., a^(r-1).x); nullopt when all vanish to precision.
  std::vector<std::optional<int>> minor_valuations;
};

/// The coefficient equation that blocks a solve.
struct Obstruction {
  std::string relation;
  int power = 0;
  Rational value;
};

RankCertificate thematic_rank(const XiElement& x, int bound);

struct ThematicResult {
  enum class Verdict { Yes, No, Inconclusive };
  Verdict verdict = Verdict::No;
  RankCertificate certificate;
  std::vector<TruncSeries> relations;  // S_0..S_{k-1} when Yes
  std::string reason;
};

ThematicResult is_k_thematic(const XiElement& x, int k);

/// Solution of b.T' - c.T = rhs. The b^c coefficient of T is free and
/// set to zero; `free_power` reports it when it lies inside the precision.
struct BOdeResult {
  std::optional<TruncSeries> solution;
  std::optional<int> free_power;
  std::optional<Obstruction> obstruction;
  bool ok() const { return solution.has_value(); }
};

BOdeResult solve_b_ode(int c, const TruncSeries& rhs);

/// gamma(lambda1, p) = (lambda1 - 1) lambda1 ... (lambda1 + p - 2)
Rational gamma_factor(const Rational& lambda1, int p);
/// c(lambda1, p) = -gamma(lambda1, p) / p
Rational canonical_constant(const Rational& lambda1, int p);

/// chi = rho.s^(lambda1+p-2).Log s + S.s^(lambda1-2) with
/// (a - (lambda1+p-1)b).chi = (1 + alpha.b^p).b.s^(lambda1-2).
struct ChiSolution {
  Rational rho;
  TruncSeries S;  // with the free b^p coefficient equal to z
  int free_power = 0;
};
ChiSolution solve_chi_equation(const Rational& lambda1, int p, const Rational& alpha, int prec,
                               const Rational& z = Rational(0));

struct Rank2Reduction {
  std::optional<Rational> alpha;  // absent for p = 0
  XiElement generator;            // alpha.s^(l1+p-2).Log s + c(l1,p).s^(l1-2), or (l1-1).s^(l1-2).Log s
  TruncSeries S;                  // (a - lambda_2 b).phi' = S.s^(lambda1-1) after normalization
};

/// Canonical rank-2 reduction of a 2-thematic phi with invariants
/// (lambda1, p). Throws WrongInvariants when phi does not have them.
Rank2Reduction rank2_reduce(const XiElement& phi, const Rational& lambda1, int p);

/// Coefficient of b^(p_1) in the relation of a rank-2 presentation with
/// R_1(0) = 1; throws NotNormalized otherwise.
Rational parameter_of_rank2(const ThemePresentation& e);

struct Distinguisher {
  std::string relation;
  std::optional<CascadeConstraint> constraint;
  LinearForm reduced;  // a non-zero constant after elimination
};

struct IsomorphismResult {
  enum class Verdict { Isomorphic, NotIsomorphic, Inconclusive };
  Verdict verdict = Verdict::NotIsomorphic;
  /// epsilon_1..epsilon_k in E with (a - l_1 b) eps_1 = 0 and
  /// (a - l_{j+1} b) eps_{j+1} = S'_j eps_j.
  std::vector<ThemeElement> witness;
  std::optional<Distinguisher> distinguisher;
  std::string reason;
  CascadeResult cascade;
};

/// Is E' isomorphic to E? Searches eps_k in E, eps_k(0)-coefficient of e_k
/// equal to 1, annihilated by the operator of E'.
IsomorphismResult isomorphism_test(const ThemePresentation& e, const ThemePresentation& e_prime);

struct InvarianceResult {
  enum class Verdict { Invariant, NotInvariant, Inconclusive };
  Verdict verdict = Verdict::NotInvariant;
  std::optional<ThemeElement> witness;  // x in F_{k-1} \ F_{k-2}, P.x = 0
  /// Constraints in the order they were met, rendered with parameter names.
  std::vector<std::string> chain;
  std::string reason;
  CascadeResult cascade;
};

InvarianceResult invariance_test(const ThemePresentation& e);

/// Per grid point outcome of scan_family.
struct ScanRecord {
  ParameterMap point;
  std::optional<RankCertificate> rank;
  std::vector<Rational> bernstein;  // factor exponents
  std::optional<FundamentalInvariants> invariants;
  std::vector<std::string> flags;
  std::optional<std::string> error;
  bool inconclusive = false;
  std::optional<bool> invariant;  // theme families only
};

struct ScanReport {
  std::vector<ScanRecord> records;
  /// Distinct invariants in order of first appearance with their points.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> strata;
  bool jump = false;
  bool any_inconclusive = false;
};

/// Expands "z=-2..2 step 1/2" style axes into the sorted cartesian grid.
std::vector<ParameterMap> make_grid(const std::map<std::string, std::vector<Rational>>& axes);
std::vector<Rational> parse_range(std::string_view text);

struct ScanOptions {
  int prec = kDefaultPrecision;
  int rank_bound = 4;
  int threads = 1;
};

ScanReport scan_family(const XiExpression& family, const std::vector<ParameterMap>& grid,
                       const ScanOptions& options);

/// Theme family: invariants fixed, relation series given as literals in
/// the grid parameters. Records the invariance verdict per point.
struct ThemeFamily {
  FundamentalInvariants invariants;
  std::vector<std::string> relations;
};
ScanReport scan_family(const ThemeFamily& family, const std::vector<ParameterMap>& grid,
                       const ScanOptions& options);

}  // namespace themelab
