#include "themelab/param_series.hpp"

#include <sstream>

#include "themelab/errors.hpp"

namespace themelab {

ParamSeries ParamSeries::truncated(int prec) const {
  ParamSeries r(prec);
  for (int m = 0; m < prec && m < this->prec(); ++m) r.c_[m] = c_[m];
  return r;
}

ParamSeries& ParamSeries::operator+=(const ParamSeries& other) {
  if (other.prec() < prec()) c_.resize(static_cast<std::size_t>(other.prec()));
  for (int m = 0; m < prec(); ++m) c_[m] += other.c_[m];
  return *this;
}

ParamSeries& ParamSeries::operator-=(const ParamSeries& other) {
  if (other.prec() < prec()) c_.resize(static_cast<std::size_t>(other.prec()));
  for (int m = 0; m < prec(); ++m) c_[m] -= other.c_[m];
  return *this;
}

TruncSeries ParamSeries::evaluate(const std::vector<Rational>& values) const {
  std::vector<Rational> out;
  out.reserve(c_.size());
  for (const auto& f : c_) out.push_back(f.evaluate(values));
  return TruncSeries(std::move(out));
}

ParamSeries operator*(const TruncSeries& s, const ParamSeries& x) {
  const int prec = std::min(s.prec(), x.prec());
  ParamSeries r(prec);
  for (int i = 0; i < prec; ++i) {
    if (s[i] == 0) continue;
    for (int j = 0; i + j < prec; ++j)
      if (!x[j].is_zero()) r[i + j] += x[j] * s[i];
  }
  return r;
}

std::vector<std::string> CascadeResult::names() const {
  std::vector<std::string> out;
  for (const auto& p : params) out.push_back(p.name);
  return out;
}

ThemeElement CascadeResult::element(int stage, int rank, const std::vector<Rational>& values) const {
  const auto& comps = stages.at(static_cast<std::size_t>(stage - 1));
  const int prec = comps.empty() ? 1 : comps.front().prec();
  ThemeElement x = ThemeElement::zero(rank, prec);
  for (std::size_t i = 0; i < comps.size(); ++i) x.comps[i] = comps[i].evaluate(values);
  return x;
}

CascadeResult run_cascade(const ThemePresentation& host, const FundamentalInvariants& target_inv,
                          const std::vector<TruncSeries>& target_relations, int ansatz_level) {
  const int k = target_inv.rank();
  const int r = ansatz_level;
  if (r < 1 || r > host.rank()) throw InvalidArgument("cascade ansatz level out of range");
  if (static_cast<int>(target_relations.size()) != k - 1)
    throw InvalidArgument("cascade: wrong number of target relations");
  CascadeResult out;
  int prec = host.prec();
  std::vector<ParamSeries> w(static_cast<std::size_t>(r), ParamSeries(prec));  // W_0 = 0

  auto record = [&](CascadeConstraint::Kind kind, int stage, int comp, int power, const LinearForm& f) {
    if (!f.is_zero()) out.constraints.push_back(CascadeConstraint{kind, stage, comp, power, f});
  };

  for (int j = 1; j <= k; ++j) {
    const Rational lj = target_inv.lambda(j);
    const int out_prec = prec - 1;
    if (out_prec < 1) throw PrecisionExhausted("cascade: precision exhausted at stage " + std::to_string(j));
    std::vector<ParamSeries> y(static_cast<std::size_t>(r), ParamSeries(out_prec));
    for (int i = r; i >= 1; --i) {
      ParamSeries rhs = w[i - 1].truncated(prec);
      if (i < r) rhs -= host.relation(i) * y[i];
      // b(bY' - cY) = rhs with c = l_j - lambda_i
      record(CascadeConstraint::Kind::ConstantTerm, j, i, 0, rhs[0]);
      const Rational c = lj - host.lambda(i);
      std::optional<long> res;
      if (is_integer(c) && c >= 0) res = to_long(c);
      if (res && *res >= out_prec) ++out.hidden_resonances;
      ParamSeries& yi = y[i - 1];
      for (int m = 0; m < out_prec && m + 1 < rhs.prec(); ++m) {
        if (res && m == *res) {
          record(CascadeConstraint::Kind::Resonance, j, i, m + 1, rhs[m + 1]);
          const int index = static_cast<int>(out.params.size());
          out.params.push_back(CascadeParameter{
              "Y" + std::to_string(j) + ".e" + std::to_string(i) + ".b" + std::to_string(m), j, i, m});
          yi[m] = LinearForm::variable(index);
          continue;
        }
        yi[m] = rhs[m + 1] * (1 / (Rational(m) - c));
      }
    }
    for (int i = 1; i <= r; ++i)
      w[i - 1] = j < k ? target_relations[j - 1] * y[i - 1] : y[i - 1];
    out.stages.push_back(std::move(y));
    prec = out_prec;
  }
  return out;
}

std::string to_string(const CascadeConstraint& c, const std::vector<std::string>& names) {
  std::ostringstream os;
  switch (c.kind) {
    case CascadeConstraint::Kind::ConstantTerm:
      os << "stage " << c.stage << ", e" << c.component << ", constant term: ";
      break;
    case CascadeConstraint::Kind::Resonance:
      os << "stage " << c.stage << ", e" << c.component << ", resonant b^" << c.power << ": ";
      break;
    case CascadeConstraint::Kind::Normalization:
      os << "normalization: ";
      break;
  }
  os << to_string(c.form, names) << " = 0";
  return os.str();
}

}  // namespace themelab
