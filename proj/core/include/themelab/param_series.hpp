#pragma once

#include <string>
#include <vector>

#include "themelab/linalg.hpp"
#include "themelab/theme.hpp"

namespace themelab {

/// Truncated series whose coefficients are affine forms in unknown
/// scalars.
class ParamSeries {
 public:
  explicit ParamSeries(int prec) : c_(static_cast<std::size_t>(prec)) {}

  int prec() const { return static_cast<int>(c_.size()); }
  const LinearForm& operator[](int m) const { return c_[m]; }
  LinearForm& operator[](int m) { return c_[m]; }

  ParamSeries truncated(int prec) const;
  ParamSeries& operator+=(const ParamSeries& other);
  ParamSeries& operator-=(const ParamSeries& other);
  /// Numeric value with the unknowns set to `values`.
  TruncSeries evaluate(const std::vector<Rational>& values) const;

 private:
  std::vector<LinearForm> c_;
};

ParamSeries operator*(const TruncSeries& s, const ParamSeries& x);

/// One unknown introduced by the cascade: the free coefficient of
/// b^power in component e_component of the stage-`stage` element.
struct CascadeParameter {
  std::string name;
  int stage = 0;
  int component = 0;
  int power = 0;
};

/// A scalar equation form = 0 produced while solving a stage.
struct CascadeConstraint {
  enum class Kind { ConstantTerm, Resonance, Normalization };
  Kind kind = Kind::ConstantTerm;
  int stage = 0;
  int component = 0;
  int power = 0;  // b-power of the right-hand side coefficient
  LinearForm form;
};

/// Outside-in solution of P'.x = 0 inside a presentation E, where
/// P' = (a - l_1 b) T_1^{-1} ... T_{k-1}^{-1} (a - l_k b) is the operator
/// of the target data (l_j, T_j). Stage j solves
///   (a - l_j b) Y_j = T_{j-1} Y_{j-1},   Y_0 = 0,
/// with every Y_j in F_r. Components are solved from the top down through
/// b(bY' - cY) = rhs; each resonance adds one unknown.
struct CascadeResult {
  std::vector<CascadeParameter> params;
  std::vector<CascadeConstraint> constraints;
  /// stages[j-1][i-1] = component e_i of Y_j.
  std::vector<std::vector<ParamSeries>> stages;
  /// Resonances that fell beyond the available precision.
  int hidden_resonances = 0;

  std::vector<std::string> names() const;
  /// Y_j evaluated at the given unknowns, as an element of E.
  ThemeElement element(int stage, int rank, const std::vector<Rational>& values) const;
};

CascadeResult run_cascade(const ThemePresentation& host, const FundamentalInvariants& target_inv,
                          const std::vector<TruncSeries>& target_relations, int ansatz_level);

std::string to_string(const CascadeConstraint& c, const std::vector<std::string>& names);

}  // namespace themelab
