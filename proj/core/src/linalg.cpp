#include "themelab/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "themelab/errors.hpp"

namespace themelab {

LinearForm LinearForm::variable(int index) {
  LinearForm f;
  f.coeffs.assign(static_cast<std::size_t>(index + 1), Rational(0));
  f.coeffs[index] = 1;
  return f;
}

bool LinearForm::is_zero() const { return constant == 0 && is_constant(); }

bool LinearForm::is_constant() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; });
}

Rational LinearForm::coeff(int i) const {
  return i < size() ? coeffs[static_cast<std::size_t>(i)] : Rational(0);
}

Rational LinearForm::evaluate(const std::vector<Rational>& values) const {
  Rational v = constant;
  const std::size_t n = std::min(coeffs.size(), values.size());
  for (std::size_t i = 0; i < n; ++i)
    if (coeffs[i] != 0) v += coeffs[i] * values[i];
  return v;
}

LinearForm& LinearForm::operator+=(const LinearForm& other) {
  constant += other.constant;
  if (coeffs.size() < other.coeffs.size()) coeffs.resize(other.coeffs.size(), Rational(0));
  for (std::size_t i = 0; i < other.coeffs.size(); ++i)
    if (other.coeffs[i] != 0) coeffs[i] += other.coeffs[i];
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& other) {
  constant -= other.constant;
  if (coeffs.size() < other.coeffs.size()) coeffs.resize(other.coeffs.size(), Rational(0));
  for (std::size_t i = 0; i < other.coeffs.size(); ++i)
    if (other.coeffs[i] != 0) coeffs[i] -= other.coeffs[i];
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& c) {
  constant *= c;
  for (auto& x : coeffs) x *= c;
  return *this;
}

LinearForm LinearForm::operator-() const {
  LinearForm r(*this);
  r *= Rational(-1);
  return r;
}

bool operator==(const LinearForm& x, const LinearForm& y) {
  if (x.constant != y.constant) return false;
  const int n = std::max(x.size(), y.size());
  for (int i = 0; i < n; ++i)
    if (x.coeff(i) != y.coeff(i)) return false;
  return true;
}

LinearForm operator+(LinearForm x, const LinearForm& y) { return x += y; }
LinearForm operator-(LinearForm x, const LinearForm& y) { return x -= y; }
LinearForm operator*(LinearForm x, const Rational& c) { return x *= c; }
LinearForm operator*(const Rational& c, LinearForm x) { return x *= c; }

std::string to_string(const LinearForm& f, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  auto term = [&](const Rational& c, const std::string& name) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (name.empty()) {
      os << to_string(mag);
    } else {
      if (mag != 1) os << to_string(mag) << "*";
      os << name;
    }
  };
  for (int i = 0; i < f.size(); ++i) {
    if (f.coeffs[i] == 0) continue;
    term(f.coeffs[i], i < static_cast<int>(names.size()) ? names[i] : "x" + std::to_string(i));
  }
  if (f.constant != 0) term(f.constant, "");
  if (first) return "0";
  return os.str();
}

std::vector<int> rref(Matrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int sel = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
    const Rational inv = 1 / m(row, col);
    for (int c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Rational f = m(r, col);
      for (int c = col; c < m.cols(); ++c)
        if (m(row, c) != 0) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(Matrix m) { return static_cast<int>(rref(m).size()); }

std::vector<std::vector<Rational>> nullspace(const Matrix& m) {
  Matrix r = m;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(m.cols()));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(static_cast<int>(i), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rational>> solve(const Matrix& m, const std::vector<Rational>& rhs) {
  if (static_cast<int>(rhs.size()) != m.rows()) throw InvalidArgument("solve: rhs size mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = rhs[r];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  std::vector<Rational> x(static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(static_cast<int>(i), m.cols());
  return x;
}

LinearForm IncrementalSystem::reduce(const LinearForm& form) const {
  LinearForm f = form;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Rational c = f.coeff(pivots_[i]);
    if (c != 0) f -= rows_[i] * c;
  }
  return f;
}

bool IncrementalSystem::is_pivot(int var) const {
  return std::find(pivots_.begin(), pivots_.end(), var) != pivots_.end();
}

IncrementalSystem::Status IncrementalSystem::add(const LinearForm& form) {
  LinearForm f = reduce(form);
  int pivot = -1;
  for (int i = f.size() - 1; i >= 0; --i)
    if (f.coeffs[i] != 0) {
      pivot = i;
      break;
    }
  if (pivot < 0) return f.constant == 0 ? Status::Redundant : Status::Inconsistent;
  f *= 1 / f.coeffs[pivot];
  for (auto& row : rows_) {
    const Rational c = row.coeff(pivot);
    if (c != 0) row -= f * c;
  }
  rows_.push_back(std::move(f));
  pivots_.push_back(pivot);
  return Status::Independent;
}

std::vector<Rational> IncrementalSystem::solution(int n, const std::vector<Rational>& free_values) const {
  std::vector<Rational> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n && i < static_cast<int>(free_values.size()); ++i)
    if (!is_pivot(i)) x[i] = free_values[i];
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    // pivot + (rest) = 0, rest only involves free unknowns
    LinearForm rest = rows_[i];
    rest.coeffs[pivots_[i]] = 0;
    if (pivots_[i] < n) x[pivots_[i]] = -rest.evaluate(x);
  }
  return x;
}

}  // namespace themelab

namespace themelab {

TruncSeries series_det(const SeriesMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) throw InvalidArgument("series_det of an empty matrix");
  int prec = m[0][0].prec();
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != n) throw InvalidArgument("series_det: matrix is not square");
    for (const auto& s : row) prec = std::min(prec, s.prec());
  }
  // minors[mask] = det of the first popcount(mask) rows on the columns in mask
  std::vector<std::optional<TruncSeries>> minors(std::size_t{1} << n);
  minors[0] = TruncSeries::one(prec);
  for (unsigned mask = 1; mask < minors.size(); ++mask) {
    const int row = __builtin_popcount(mask) - 1;
    TruncSeries acc(prec);
    int sign_pos = 0;
    for (int c = n - 1; c >= 0; --c) {
      if (!(mask & (1u << c))) continue;
      // sign from the number of selected columns after c
      const auto& entry = m[row][c];
      const auto& sub = *minors[mask & ~(1u << c)];
      if (!entry.is_zero() && !sub.is_zero()) {
        if (sign_pos % 2 == 0)
          acc += entry * sub;
        else
          acc -= entry * sub;
      }
      ++sign_pos;
    }
    minors[mask] = std::move(acc);
  }
  return *minors.back();
}

CramerResult cramer_solve(const SeriesMatrix& m, const std::vector<TruncSeries>& rhs) {
  CramerResult out;
  const std::size_t n = m.size();
  // m = C.diag(b^v): pulling the column valuations out first keeps the
  // precision loss to the valuation of det(C).
  std::vector<int> v(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    std::optional<int> least;
    for (std::size_t r = 0; r < n; ++r) {
      const auto vr = m[r][c].valuation();
      if (vr && (!least || *vr < *least)) least = vr;
    }
    if (!least) return out;
    v[c] = *least;
  }
  SeriesMatrix cm = m;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) cm[r][c] = m[r][c].shift_down(v[c]);
  const TruncSeries det = series_det(cm);
  const auto dv = det.valuation();
  if (!dv) return out;
  const int d = *dv;
  out.det_valuation = d + std::accumulate(v.begin(), v.end(), 0);
  const TruncSeries unit_inv = det.shift_down(d).inverse();
  for (std::size_t j = 0; j < n; ++j) {
    SeriesMatrix mj = cm;
    for (std::size_t r = 0; r < n; ++r) mj[r][j] = rhs[r];
    const TruncSeries num = series_det(mj);
    const int need = d + v[j];
    const auto nv = num.valuation();
    if (nv && *nv < need) {
      out.status = CramerResult::Status::NotIntegral;
      out.x.clear();
      return out;
    }
    if (num.prec() <= need)
      throw PrecisionExhausted("cramer_solve: determinant valuation reaches the precision");
    out.x.push_back(num.shift_down(need) * unit_inv);
  }
  out.status = CramerResult::Status::Ok;
  return out;
}

}  // namespace themelab
