#pragma once

#include <optional>
#include <string>
#include <vector>

#include "themelab/rational.hpp"
#include "themelab/trunc_series.hpp"

namespace themelab {

/// Affine form c + sum_i coeffs[i].x_i over a growing set of unknowns.
/// Missing trailing coefficients are zero.
struct LinearForm {
  Rational constant;
  std::vector<Rational> coeffs;

  static LinearForm variable(int index);
  static LinearForm scalar(const Rational& c) { return LinearForm{c, {}}; }

  bool is_zero() const;
  bool is_constant() const;
  Rational coeff(int i) const;
  int size() const { return static_cast<int>(coeffs.size()); }
  /// Value with x_i = values[i] (missing values count as zero).
  Rational evaluate(const std::vector<Rational>& values) const;

  LinearForm& operator+=(const LinearForm& other);
  LinearForm& operator-=(const LinearForm& other);
  LinearForm& operator*=(const Rational& c);
  LinearForm operator-() const;
  friend bool operator==(const LinearForm& x, const LinearForm& y);
};

LinearForm operator+(LinearForm x, const LinearForm& y);
LinearForm operator-(LinearForm x, const LinearForm& y);
LinearForm operator*(LinearForm x, const Rational& c);
LinearForm operator*(const Rational& c, LinearForm x);

/// "2*rho - 3/2*sigma + 1" using the given names for the unknowns.
std::string to_string(const LinearForm& f, const std::vector<std::string>& names);

/// Dense row-major rational matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form in place; returns the pivot column of each
/// non-zero row.
std::vector<int> rref(Matrix& m);
int rank(Matrix m);
/// Basis of {x : m.x = 0}.
std::vector<std::vector<Rational>> nullspace(const Matrix& m);
/// Some x with m.x = rhs (free unknowns set to zero), or nullopt.
std::optional<std::vector<Rational>> solve(const Matrix& m, const std::vector<Rational>& rhs);

/// Affine equations form = 0 added one at a time and kept fully reduced.
/// The pivot of each new equation is its highest-index unknown, so later
/// unknowns are expressed through earlier ones.
class IncrementalSystem {
 public:
  enum class Status { Independent, Redundant, Inconsistent };

  /// Adds form = 0. An inconsistent equation is reported and not stored.
  Status add(const LinearForm& form);
  /// The form with every pivot unknown eliminated.
  LinearForm reduce(const LinearForm& form) const;
  bool is_pivot(int var) const;
  /// The solution with every free unknown given by `free_values` (missing
  /// entries are zero); pivots are filled in. Result has `n` entries.
  std::vector<Rational> solution(int n, const std::vector<Rational>& free_values = {}) const;
  const std::vector<LinearForm>& rows() const { return rows_; }

 private:
  std::vector<LinearForm> rows_;  // rows_[i] has pivot pivots_[i], coefficient 1
  std::vector<int> pivots_;
};

using SeriesMatrix = std::vector<std::vector<TruncSeries>>;

/// Determinant of a square matrix of series (expansion over column
/// subsets, so no division is needed).
TruncSeries series_det(const SeriesMatrix& m);

/// Solution of m.x = rhs over C[[b]] by Cramer's rule. det(m) = b^d.unit;
/// the solution exists in C[[b]] iff every det(m_j) is divisible by b^d.
struct CramerResult {
  enum class Status { Ok, Singular, NotIntegral };
  Status status = Status::Singular;
  std::vector<TruncSeries> x;  // precision drops by d
  std::optional<int> det_valuation;
};
CramerResult cramer_solve(const SeriesMatrix& m, const std::vector<TruncSeries>& rhs);

}  // namespace themelab
