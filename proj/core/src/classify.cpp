#include "themelab/classify.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <sstream>

#include "themelab/errors.hpp"

namespace themelab {

namespace {

// Least valuation over the r x r minors on the first r columns.
std::optional<int> least_minor_valuation(const std::vector<XiElement>& it, int r) {
  const int rows = it.front().max_log_degree() + 1;
  std::vector<int> sel(static_cast<std::size_t>(r));
  std::iota(sel.begin(), sel.end(), 0);
  std::optional<int> best;
  while (true) {
    SeriesMatrix m;
    for (int row : sel) {
      std::vector<TruncSeries> line;
      for (int c = 0; c < r; ++c) line.push_back(it[c].comp(row));
      m.push_back(std::move(line));
    }
    const auto v = series_det(m).valuation();
    if (v && (!best || *v < *best)) best = v;
    int i = r - 1;
    while (i >= 0 && sel[i] == rows - r + i) --i;
    if (i < 0) break;
    ++sel[i];
    for (int j = i + 1; j < r; ++j) sel[j] = sel[j - 1] + 1;
  }
  return best;
}

}  // namespace

RankCertificate thematic_rank(const XiElement& x, int bound) {
  if (bound < 1) throw InvalidArgument("thematic_rank: bound must be >= 1");
  RankCertificate cert;
  const int ambient = x.max_log_degree() + 1;
  const int limit = std::min(bound, ambient);
  std::vector<XiElement> it{x};
  for (int r = 1; r <= limit; ++r) {
    if (r > 1) it.push_back(a_apply(it.back()));
    const auto v = least_minor_valuation(it, r);
    cert.minor_valuations.push_back(v);
    if (!v) break;
    cert.lower = r;
  }
  if (cert.lower == ambient) {
    cert.upper = ambient;
    cert.upper_certified = true;
  } else if (cert.lower == limit) {
    cert.upper = ambient;  // nothing was probed above the bound
    cert.upper_certified = true;
  } else {
    cert.upper = cert.lower;
  }
  return cert;
}

ThematicResult is_k_thematic(const XiElement& x, int k) {
  if (k < 1) throw InvalidArgument("is_k_thematic: k must be >= 1");
  ThematicResult out;
  out.certificate = thematic_rank(x, k + 1);
  const auto& cert = out.certificate;
  if (cert.lower > k) {
    out.verdict = ThematicResult::Verdict::No;
    out.reason = "rank is at least " + std::to_string(cert.lower);
    return out;
  }
  if (cert.lower < k) {
    if (cert.upper_certified) {
      out.verdict = ThematicResult::Verdict::No;
      out.reason = "rank is at most " + std::to_string(cert.upper);
      return out;
    }
    // a^lower.x must close up on lower iterates with room to spare
    try {
      const auto bd = bernstein_from_generator(x, std::max(cert.lower, 1));
      if (bd.det_valuation * 2 < x.prec()) {
        out.verdict = ThematicResult::Verdict::No;
        out.reason = "rank " + std::to_string(cert.lower) + " to the working precision";
        return out;
      }
    } catch (const Error&) {
    }
    out.verdict = ThematicResult::Verdict::Inconclusive;
    out.reason = "precision cannot separate rank " + std::to_string(k) + " from " +
                 std::to_string(cert.lower);
    return out;
  }
  try {
    const auto bd = bernstein_from_generator(x, k);
    out.verdict = ThematicResult::Verdict::Yes;
    out.relations = bd.S;
  } catch (const NotThematic& e) {
    out.verdict = ThematicResult::Verdict::No;
    out.reason = e.what();
  } catch (const PrecisionExhausted& e) {
    out.verdict = ThematicResult::Verdict::Inconclusive;
    out.reason = e.what();
  }
  return out;
}

BOdeResult solve_b_ode(int c, const TruncSeries& rhs) {
  BOdeResult out;
  std::vector<Rational> t(static_cast<std::size_t>(rhs.prec()));
  for (int m = 0; m < rhs.prec(); ++m) {
    if (m == c) {
      if (rhs[m] != 0) {
        out.obstruction = Obstruction{"coefficient of b^" + std::to_string(c) +
                                          " of the right-hand side must vanish; found " +
                                          to_string(rhs[m]),
                                      c, rhs[m]};
        return out;
      }
      out.free_power = c;
      continue;
    }
    t[m] = rhs[m] / Rational(m - c);
  }
  out.solution = TruncSeries(std::move(t));
  return out;
}

Rational gamma_factor(const Rational& lambda1, int p) {
  Rational g = 1;
  for (int i = 0; i < p; ++i) g *= lambda1 - 1 + i;
  return g;
}

Rational canonical_constant(const Rational& lambda1, int p) {
  if (p < 1) throw InvalidArgument("c(lambda1, p) needs p >= 1");
  return -gamma_factor(lambda1, p) / p;
}

ChiSolution solve_chi_equation(const Rational& lambda1, int p, const Rational& alpha, int prec,
                               const Rational& z) {
  if (p < 1) throw InvalidArgument("solve_chi_equation needs p >= 1");
  if (lambda1 <= 1) throw InvalidArgument("solve_chi_equation needs lambda1 > 1");
  if (p >= prec) throw PrecisionExhausted("solve_chi_equation: b^p is beyond the precision");
  // Dividing by s^(lambda1-1)/(lambda1-1) = b.s^(lambda1-2):
  //   b.S' - p.S + rho.gamma.b^p = 1 + alpha.b^p
  const Rational g = gamma_factor(lambda1, p);
  TruncSeries rhs = TruncSeries::one(prec) + TruncSeries::monomial(alpha, p, prec);
  const BOdeResult first = solve_b_ode(p, rhs);
  Rational rho = 0;
  if (!first.ok()) rho = first.obstruction->value / g;
  rhs -= TruncSeries::monomial(rho * g, p, prec);
  BOdeResult sol = solve_b_ode(p, rhs);
  if (!sol.ok()) throw NotSolvable("chi equation: " + sol.obstruction->relation);
  TruncSeries s = *sol.solution;
  s.set(p, z);
  return ChiSolution{rho, s, p};
}

Rank2Reduction rank2_reduce(const XiElement& phi, const Rational& lambda1, int p) {
  if (p < 0) throw InvalidArgument("rank2_reduce: p must be >= 0");
  if (phi.max_log_degree() < 1) throw WrongInvariants("rank2_reduce: phi has no Log s term");
  for (int j = 2; j <= phi.max_log_degree(); ++j)
    if (!phi.comp(j).is_zero()) throw WrongInvariants("rank2_reduce: phi has Log s powers above 1");
  const XiElement x = phi.with_log_bound(1);
  const Rational lambda = x.lambda();
  const Rational lambda2 = lambda1 + p - 1;
  if (class_representative(lambda1) != lambda)
    throw WrongInvariants("rank2_reduce: lambda1 is not in the class of phi");
  if (lambda1 - 1 < lambda) throw WrongInvariants("rank2_reduce: lambda1 too small for phi's class");
  const int prec = x.prec();
  const XiElement log_term = power_monomial(lambda2, 1, lambda, 1, prec);  // s^(l2-1) Log s
  const XiElement base = power_monomial(lambda1, 0, lambda, 1, prec);      // s^(l1-1)

  // scale so that the Log part is exactly s^(l2-1) Log s
  const int m = static_cast<int>(to_long(lambda2 - lambda));
  const auto v = x.comp(1).valuation();
  if (!v || *v != m)
    throw WrongInvariants("rank2_reduce: the Log s coefficient does not start at s^(lambda1+p-2)");
  const TruncSeries unit = x.comp(1).shift_down(m) * (1 / log_term.comp(1)[m]);
  const XiElement phi1 = unit.inverse() * x;
  const XiElement y = a_apply(phi1) - (lambda2 * TruncSeries::monomial(Rational(1), 1, phi1.prec())) * phi1;
  if (!y.comp(1).is_zero()) throw WrongInvariants("rank2_reduce: internal normalization failed");
  const int mb = static_cast<int>(to_long(lambda1 - lambda));
  const auto vy = y.comp(0).valuation();
  if (vy && *vy < mb) throw WrongInvariants("rank2_reduce: (a - lambda2 b).phi is not in C[[b]].s^(lambda1-1)");
  const TruncSeries s = y.comp(0).shift_down(mb) * (1 / base.comp(0)[mb]);
  if (s[0] == 0) throw WrongInvariants("rank2_reduce: S(0) = 0, so lambda1 is not the first invariant");

  Rank2Reduction out{std::nullopt, XiElement(lambda, 1, prec), s};
  if (p == 0) {
    out.generator = (lambda1 - 1) * power_monomial(lambda1 - 1, 1, lambda, 1, prec);
    return out;
  }
  if (p >= s.prec()) throw PrecisionExhausted("rank2_reduce: b^p coefficient beyond precision");
  const Rational s0 = s[0];
  const Rational sp = s[p];
  if (sp == 0) throw WrongInvariants("rank2_reduce: the b^p coefficient of S vanishes");
  // S = S0 + Sp b^p + b.St, St without b^(p-1); b.T' - (p-1).T = St
  std::vector<Rational> st(static_cast<std::size_t>(s.prec() - 1));
  for (int i = 0; i + 1 < s.prec(); ++i)
    if (i + 1 != p) st[i] = s[i + 1];
  const BOdeResult t = solve_b_ode(p - 1, TruncSeries(std::move(st)));
  if (!t.ok()) throw NotSolvable("rank2_reduce: " + t.obstruction->relation);
  const XiElement psi = phi1 - *t.solution * base;
  const XiElement check = a_apply(psi) - (lambda2 * TruncSeries::monomial(Rational(1), 1, psi.prec())) * psi;
  const TruncSeries target = TruncSeries::constant(s0, psi.prec()) + TruncSeries::monomial(sp, p, psi.prec());
  if (!(check == target * base)) throw NotSolvable("rank2_reduce: reduced generator fails its relation");
  out.alpha = sp / s0;
  out.generator = *out.alpha * log_term + canonical_constant(lambda1, p) *
                                              power_monomial(lambda1 - 1, 0, lambda, 1, prec);
  return out;
}

Rational parameter_of_rank2(const ThemePresentation& e) {
  if (e.rank() != 2) throw InvalidArgument("parameter_of_rank2 needs a rank 2 presentation");
  const int p = e.invariants().p[0];
  if (p < 1) throw InvalidArgument("a rank 2 theme with p1 = 0 has no parameter");
  const auto& s = e.relation(1);
  if (s[0] != 1) throw NotNormalized("S(0) = " + to_string(s[0]) + ", expected 1");
  return s.coefficient(p);
}

namespace {

ThemeElement relation_residual(const ThemePresentation& e, const Rational& l, const ThemeElement& x,
                               const ThemeElement& rhs) {
  const ThemeElement ax = theme_a_apply(e, x);
  const int prec = ax.prec();
  return ax - (l * TruncSeries::monomial(Rational(1), 1, prec)) * x - rhs;
}

}  // namespace

IsomorphismResult isomorphism_test(const ThemePresentation& e, const ThemePresentation& e_prime) {
  IsomorphismResult out;
  const int k = e.rank();
  if (!(e.invariants() == e_prime.invariants())) {
    out.verdict = IsomorphismResult::Verdict::NotIsomorphic;
    out.reason = "fundamental invariants differ";
    out.distinguisher = Distinguisher{"fundamental invariants: " + to_string(e.invariants()) + " vs " +
                                          to_string(e_prime.invariants()),
                                      std::nullopt, LinearForm::scalar(Rational(1))};
    return out;
  }
  out.cascade = run_cascade(e, e_prime.invariants(), e_prime.relations(), k);
  const auto& cas = out.cascade;
  const auto names = cas.names();

  // eps_k = e_k + ...: the free constant term of its e_k component is 1
  std::vector<CascadeConstraint> ordered;
  for (const auto& par : cas.params)
    if (par.stage == k && par.component == k && par.power == 0) {
      LinearForm f = LinearForm::variable(static_cast<int>(&par - cas.params.data()));
      f.constant = -1;
      ordered.push_back(CascadeConstraint{CascadeConstraint::Kind::Normalization, k, k, 0, f});
    }
  if (ordered.empty()) {
    const auto& top = cas.stages.back()[k - 1];
    LinearForm f = top[0];
    f.constant -= 1;
    ordered.push_back(CascadeConstraint{CascadeConstraint::Kind::Normalization, k, k, 0, f});
  }
  ordered.insert(ordered.end(), cas.constraints.begin(), cas.constraints.end());

  IncrementalSystem sys;
  for (const auto& c : ordered) {
    if (sys.add(c.form) == IncrementalSystem::Status::Inconsistent) {
      out.verdict = IsomorphismResult::Verdict::NotIsomorphic;
      const LinearForm reduced = sys.reduce(c.form);
      out.distinguisher = Distinguisher{to_string(c, names) + " reduces to " + to_string(reduced, names) + " = 0",
                                        c, reduced};
      out.reason = "no triangular basis change matches the relations";
      return out;
    }
  }
  if (cas.hidden_resonances > 0) {
    out.verdict = IsomorphismResult::Verdict::Inconclusive;
    out.reason = std::to_string(cas.hidden_resonances) + " resonance(s) beyond the working precision";
    return out;
  }
  const auto values = sys.solution(static_cast<int>(cas.params.size()));
  for (int j = 1; j <= k; ++j) out.witness.push_back(cas.element(j, k, values));
  // the witness must satisfy the target relations
  for (int j = 1; j <= k; ++j) {
    const ThemeElement rhs = j == 1 ? ThemeElement::zero(k, out.witness[0].prec())
                                    : e_prime.relation(j - 1) * out.witness[j - 2];
    if (!relation_residual(e, e_prime.lambda(j), out.witness[j - 1], rhs).is_zero())
      throw NotSolvable("isomorphism_test: witness fails relation " + std::to_string(j));
  }
  out.verdict = IsomorphismResult::Verdict::Isomorphic;
  return out;
}

InvarianceResult invariance_test(const ThemePresentation& e) {
  InvarianceResult out;
  const int k = e.rank();
  if (k < 2) throw InvalidArgument("invariance_test needs rank >= 2");
  out.cascade = run_cascade(e, e.invariants(), e.relations(), k - 1);
  const auto& cas = out.cascade;
  const auto names = cas.names();
  IncrementalSystem sys;
  for (const auto& c : cas.constraints) {
    sys.add(c.form);
    out.chain.push_back(to_string(c, names));
  }
  // a resonance past the precision brings both a constraint and a parameter
  if (cas.hidden_resonances > 0) {
    out.verdict = InvarianceResult::Verdict::Inconclusive;
    out.reason = std::to_string(cas.hidden_resonances) + " resonance(s) beyond the working precision";
    return out;
  }
  const ParamSeries& top = cas.stages.back()[k - 2];
  for (int m = 0; m < top.prec(); ++m) {
    const LinearForm f = sys.reduce(top[m]);
    if (f.is_zero()) continue;
    int var = -1;
    for (int i = 0; i < f.size(); ++i)
      if (f.coeffs[i] != 0 && !sys.is_pivot(i)) {
        var = i;
        break;
      }
    if (var < 0) continue;
    std::vector<Rational> free(cas.params.size());
    free[var] = 1;
    const auto values = sys.solution(static_cast<int>(cas.params.size()), free);
    ThemeElement x = cas.element(k, k, values);
    const Rational lead = x.component(k - 1)[m];
    x = TruncSeries::constant(1 / lead, x.prec()) * x;
    const ThemeElement residual = apply_operator(e, defining_operator(e), x);
    if (!residual.is_zero()) throw NotSolvable("invariance_test: witness residual does not vanish");
    out.verdict = InvarianceResult::Verdict::Invariant;
    out.witness = std::move(x);
    return out;
  }
  out.verdict = InvarianceResult::Verdict::NotInvariant;
  out.reason = "the constraints force the e" + std::to_string(k - 1) + " component of x to vanish";
  return out;
}

std::vector<Rational> parse_range(std::string_view text) {
  std::string s(text);
  std::vector<Rational> out;
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) throw ParseError("empty value list");
    return out;
  }
  const Rational lo = parse_rational(s.substr(0, dots));
  std::string rest = s.substr(dots + 2);
  Rational step = 1;
  const auto st = rest.find("step");
  if (st != std::string::npos) {
    step = parse_rational(rest.substr(st + 4));
    rest = rest.substr(0, st);
  }
  const Rational hi = parse_rational(rest);
  if (step <= 0) throw ParseError("range step must be positive");
  if (hi < lo) throw ParseError("empty range");
  for (Rational v = lo; v <= hi; v += step) {
    out.push_back(v);
    if (out.size() > 100000) throw ParseError("range too large");
  }
  return out;
}

std::vector<ParameterMap> make_grid(const std::map<std::string, std::vector<Rational>>& axes) {
  std::vector<ParameterMap> grid{ParameterMap{}};
  for (const auto& [name, values] : axes) {
    std::vector<Rational> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<ParameterMap> next;
    for (const auto& point : grid)
      for (const auto& v : sorted) {
        ParameterMap p = point;
        p[name] = v;
        next.push_back(std::move(p));
      }
    grid = std::move(next);
  }
  return grid;
}

namespace {

template <class F>
std::vector<ScanRecord> map_points(const std::vector<ParameterMap>& grid, int threads, F&& f) {
  std::vector<ScanRecord> out(grid.size());
  if (threads <= 1 || grid.size() < 2) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid[i]);
    return out;
  }
  std::vector<std::future<void>> jobs;
  const std::size_t n = static_cast<std::size_t>(threads);
  for (std::size_t t = 0; t < n; ++t)
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < grid.size(); i += n) out[i] = f(grid[i]);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

std::string stratum_key(const ScanRecord& r) {
  if (r.error) return "error";
  if (!r.invariants) return "rank " + std::to_string(r.rank ? r.rank->lower : 0) + ", not thematic";
  return "rank " + std::to_string(r.invariants->rank()) + ", " + to_string(*r.invariants);
}

void finish(ScanReport& report) {
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    if (r.inconclusive) report.any_inconclusive = true;
    const std::string key = stratum_key(r);
    auto it = std::find_if(report.strata.begin(), report.strata.end(),
                           [&](const auto& s) { return s.first == key; });
    if (it == report.strata.end())
      report.strata.push_back({key, {i}});
    else
      it->second.push_back(i);
  }
  std::size_t generic = 0;
  bool seen = false;
  for (std::size_t s = 0; s < report.strata.size(); ++s) {
    if (report.strata[s].first == "error") continue;
    if (!seen || report.strata[s].second.size() > report.strata[generic].second.size()) generic = s;
    seen = true;
  }
  if (!seen) return;
  for (std::size_t s = 0; s < report.strata.size(); ++s) {
    if (s == generic || report.strata[s].first == "error") continue;
    report.jump = true;
    for (std::size_t i : report.strata[s].second) report.records[i].flags.push_back("bernstein-jump");
  }
}

void classify_point(ScanRecord& rec, const XiElement& phi, int rank_bound) {
  rec.rank = thematic_rank(phi, rank_bound);
  const int k = rec.rank->lower;
  if (k == 0) {
    rec.flags.push_back("zero");
    return;
  }
  const ThematicResult th = is_k_thematic(phi, k);
  if (th.verdict == ThematicResult::Verdict::Inconclusive) {
    rec.inconclusive = true;
    rec.flags.push_back("inconclusive");
    return;
  }
  if (th.verdict == ThematicResult::Verdict::No) {
    rec.flags.push_back("not-thematic");
    return;
  }
  const BernsteinData bd = bernstein_from_generator(phi, k);
  rec.bernstein = factor_homogeneous(bd.element, phi.lambda());
  rec.invariants = invariants_from_exponents(rec.bernstein);
}

}  // namespace

ScanReport scan_family(const XiExpression& family, const std::vector<ParameterMap>& grid,
                       const ScanOptions& options) {
  ScanReport report;
  report.records = map_points(grid, options.threads, [&](const ParameterMap& point) {
    ScanRecord rec;
    rec.point = point;
    try {
      const XiElement phi = family.evaluate(point, options.prec);
      classify_point(rec, phi, options.rank_bound);
    } catch (const PrecisionExhausted& e) {
      rec.inconclusive = true;
      rec.flags.push_back("inconclusive");
      rec.error = e.what();
    } catch (const Error& e) {
      rec.error = e.what();
      rec.flags.push_back("error");
    }
    return rec;
  });
  finish(report);
  return report;
}

ScanReport scan_family(const ThemeFamily& family, const std::vector<ParameterMap>& grid,
                       const ScanOptions& options) {
  ScanReport report;
  report.records = map_points(grid, options.threads, [&](const ParameterMap& point) {
    ScanRecord rec;
    rec.point = point;
    try {
      std::vector<TruncSeries> rel;
      for (const auto& text : family.relations) rel.push_back(parse_series(text, options.prec, point));
      const ThemePresentation e(family.invariants, rel, options.prec);
      const XiElement phi = embed_into_xi(e);
      classify_point(rec, phi, std::max(options.rank_bound, e.rank()));
      if (e.rank() >= 2) {
        const InvarianceResult inv = invariance_test(e);
        if (inv.verdict == InvarianceResult::Verdict::Inconclusive) {
          rec.inconclusive = true;
          rec.flags.push_back("inconclusive");
        } else {
          rec.invariant = inv.verdict == InvarianceResult::Verdict::Invariant;
          if (*rec.invariant) rec.flags.push_back("invariant");
        }
      }
    } catch (const PrecisionExhausted& e) {
      rec.inconclusive = true;
      rec.flags.push_back("inconclusive");
      rec.error = e.what();
    } catch (const Error& e) {
      rec.error = e.what();
      rec.flags.push_back("error");
    }
    return rec;
  });
  finish(report);
  return report;
}

}  // namespace themelab
