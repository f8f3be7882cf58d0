// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "support.hpp"
#include "themelab/xi_expr.hpp"

using namespace themelab;
using namespace testsupport;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    if (!cond) ok = false;
  }
};

constexpr int kPrec = 32;

// 1. (a.b - b.a - b^2).x = 0 for random operators and elements.
Check commutation() {
  Check c;
  Rng rng(101);
  const Rational lambda = q(1, 2);
  const OreOperator a = OreOperator::a(kPrec), b = OreOperator::b(kPrec);
  const OreOperator comm = a * b - b * a - b * b;
  c.expect(comm.degree() == -1, "a.b - b.a - b^2 is not the zero operator");
  for (int t = 0; t < 100 && c.ok; ++t) {
    std::vector<TruncSeries> comps;
    for (int j = 0; j <= 3; ++j) comps.push_back(rng.series(kPrec, 8));
    const XiElement x(lambda, comps);
    std::vector<TruncSeries> oc;
    for (int i = 0; i <= 2; ++i) oc.push_back(rng.series(kPrec, 4));
    const OreOperator L(oc);
    const XiElement lhs = ore_apply(L * comm, x, [](const XiElement& y) { return a_apply(y); });
    c.expect(lhs.is_zero(), "L.(ab - ba - b^2).x != 0 at pair " + std::to_string(t));
    const XiElement y = ore_apply(L, x, [](const XiElement& z) { return a_apply(z); });
    const XiElement direct = a_apply(b_mul(y)) - b_mul(a_apply(y)) - b_mul(b_mul(y));
    c.expect(direct.is_zero(), "module actions violate the commutation rule at pair " + std::to_string(t));
  }
  return c;
}

// 2. Rank-2 canonical form and the constant c(lambda1, p).
Check rank2_canonical() {
  Check c;
  c.expect(canonical_constant(q(3), 2) == q(-3), "c(3,2) != -3");
  const std::vector<std::pair<Rational, int>> cases = {{q(3), 1}, {q(3), 2}, {q(5, 2), 3}};
  for (const auto& [l1, p] : cases) {
    for (const Rational alpha : {q(2), q(-1, 3)}) {
      const FundamentalInvariants inv{l1, {p}};
      const CanonicalPoint pt{inv, {TruncSeries::one(kPrec) + TruncSeries::monomial(alpha, p, kPrec)}};
      const BuiltTheme th = build_theme(pt, kPrec);
      const XiElement psi = embed_into_xi(th.presentation);
      const int P = psi.prec();
      const Rational lam = psi.lambda();
      const Rational l2 = l1 + p - 1;
      const XiElement seed = power_monomial(l1, 0, lam, 1, P);
      const TruncSeries S1 = TruncSeries::one(P) + TruncSeries::monomial(alpha, p, P);
      const XiElement lhs = a_apply(psi) - l2 * b_mul(psi);
      c.expect(lhs == S1 * seed, "embed does not satisfy (a - l2 b).psi = (1 + alpha b^p) s^(l1-1)");
      // (@): alpha s^(l1+p-2) Log s + c s^(l1-2), up to the factor gamma/(l1-1)
      const Rational gam = gamma_factor(l1, p);
      Rational gam_direct = 1;
      for (int i = 0; i < p; ++i) gam_direct *= l1 - 1 + i;
      c.expect(gam == gam_direct, "gamma factor mismatch");
      const Rational cc = canonical_constant(l1, p);
      c.expect(cc == -gam_direct / p, "c(l1,p) mismatch");
      const XiElement phi = alpha * power_monomial(l2, 1, lam, 1, P) + cc * power_monomial(l1 - 1, 0, lam, 1, P);
      const XiElement img = a_apply(phi) - l2 * b_mul(phi);
      c.expect(img == (gam / (l1 - 1)) * (S1 * seed), "(@) generator has the wrong image");
      const XiElement tilde = ((l1 - 1) / gam) * phi;
      const XiElement diff = psi - tilde;
      c.expect((a_apply(diff) - l2 * b_mul(diff)).is_zero(), "embedding and (@) differ beyond the kernel");
      const Rank2Reduction red = rank2_reduce(psi, l1, p);
      c.expect(red.alpha && *red.alpha == alpha, "rank2_reduce lost the parameter");
      c.expect(red.generator == phi.truncated(red.generator.prec()), "rank2_reduce generator is not (@)");
    }
  }
  return c;
}

// 3. chi-equation: rho = alpha/gamma and S = -1/p + z b^p.
Check chi_equation() {
  Check c;
  const std::vector<std::pair<Rational, int>> cases = {{q(3), 1}, {q(3), 2}, {q(5, 2), 3}};
  for (const auto& [l1, p] : cases) {
    const Rational alpha = q(7, 3), z = q(-2, 5);
    const Rational gam = gamma_factor(l1, p);
    const ChiSolution sol = solve_chi_equation(l1, p, alpha, kPrec, z);
    c.expect(sol.rho == alpha / gam, "rho != alpha/gamma");
    c.expect(sol.free_power == p, "free coefficient is not at b^p");
    const TruncSeries expect_S = TruncSeries::constant(q(-1) / p, kPrec) + TruncSeries::monomial(z, p, kPrec);
    c.expect(sol.S == expect_S, "S != -1/p + z b^p");
    // solve_b_ode on b S' - p S = 1 + alpha b^p - rho gamma b^p
    const TruncSeries rhs =
        TruncSeries::one(kPrec) + TruncSeries::monomial(alpha - sol.rho * gam, p, kPrec);
    const BOdeResult ode = solve_b_ode(p, rhs);
    c.expect(ode.ok() && ode.free_power == p, "solve_b_ode failed on the chi-equation");
    if (ode.ok()) c.expect(*ode.solution + TruncSeries::monomial(z, p, kPrec) == expect_S, "solve_b_ode disagrees");
    const BOdeResult bad = solve_b_ode(p, TruncSeries::one(kPrec) + TruncSeries::monomial(alpha, p, kPrec));
    c.expect(!bad.ok() && bad.obstruction && bad.obstruction->power == p, "rho = 0 should be obstructed at b^p");
    // the chi element itself, through the module actions
    const Rational lam = class_representative(l1);
    const Rational l2 = l1 + p - 1;
    const XiElement chi = sol.rho * power_monomial(l2, 1, lam, 1, kPrec) +
                          sol.S * power_monomial(l1 - 1, 0, lam, 1, kPrec);
    const XiElement target = (TruncSeries::one(kPrec) + TruncSeries::monomial(alpha, p, kPrec)) *
                             b_mul(power_monomial(l1 - 1, 0, lam, 1, kPrec));
    c.expect(a_apply(chi) - l2 * b_mul(chi) == target, "chi does not solve its equation in Xi");
  }
  return c;
}

// 4. Bernstein jump of s^(l-1) Log s + (z + b) s^(l-2), l = 3/2.
Check bernstein_jump() {
  Check c;
  const XiExpression fam("log(s)*s^(1/2) + (z + b)*s^(-1/2)");
  for (const long z : {-1L, 0L, 1L, 2L}) {
    const XiElement phi = fam.evaluate({{"z", q(z)}}, kPrec);
    const BernsteinData bd = bernstein_from_generator(phi, 2);
    const auto mus = factor_homogeneous(bd.element, phi.lambda());
    const std::vector<Rational> want = z == 0 ? std::vector<Rational>{q(5, 2), q(3, 2)}
                                              : std::vector<Rational>{q(3, 2), q(3, 2)};
    c.expect(mus == want, "wrong exponents at z = " + std::to_string(z));
  }
  ScanOptions opts;
  opts.rank_bound = 2;
  const ScanReport rep = scan_family(fam, make_grid({{"z", {q(-1), q(0), q(1), q(2)}}}), opts);
  c.expect(rep.jump, "scan did not flag the jump");
  for (const auto& r : rep.records) {
    const bool flagged = std::find(r.flags.begin(), r.flags.end(), "bernstein-jump") != r.flags.end();
    c.expect(flagged == (r.point.at("z") == 0), "jump flag on the wrong point");
  }
  return c;
}

// 5. Rank-3 isomorphism table.
Check rank3_isomorphism() {
  Check c;
  const std::vector<long> ab = {1, 2, 3}, gs = {0, 1, 5};
  for (long al : ab)
    for (long be : ab)
      for (long g : gs)
        for (long g2 : gs) {
          const auto e = rank3(q(al), q(be), q(g));
          const auto f = rank3(q(al), q(be), q(g2));
          const IsomorphismResult r = isomorphism_test(e, f);
          const std::string tag = " at E(" + std::to_string(al) + "," + std::to_string(be) + "," +
                                  std::to_string(g) + ") vs gamma' = " + std::to_string(g2);
          if (al != be || g == g2) {
            c.expect(r.verdict == IsomorphismResult::Verdict::Isomorphic, "expected a witness" + tag);
            if (r.verdict != IsomorphismResult::Verdict::Isomorphic) continue;
            c.expect(witness_satisfies(e, f, r.witness), "witness fails the relations" + tag);
            if (al != be) {
              const Rational U = r.witness[2].component(2)[0];
              c.expect(U == q(g - g2) / q(al - be), "U != (gamma - gamma')/(alpha - beta)" + tag);
            }
          } else {
            c.expect(r.verdict == IsomorphismResult::Verdict::NotIsomorphic && r.distinguisher.has_value(),
                     "expected a distinguisher" + tag);
          }
        }
  return c;
}

// 6. Rank-3 invariance locus {alpha = beta}.
Check rank3_invariance() {
  Check c;
  const std::vector<long> ab = {1, 2, 3}, gs = {0, 1, 5};
  for (long al : ab)
    for (long be : ab)
      for (long g : gs) {
        const auto e = rank3(q(al), q(be), q(g));
        const InvarianceResult r = invariance_test(e);
        const bool inv = r.verdict == InvarianceResult::Verdict::Invariant;
        c.expect(inv == (al == be), "invariance locus wrong at (" + std::to_string(al) + "," + std::to_string(be) +
                                        "," + std::to_string(g) + ")");
        if (!inv) continue;
        const OreOperator P = defining_operator(e);
        c.expect(r.witness->level() == 2, "witness not in F_2 minus F_1");
        c.expect(all_zero(apply_operator(e, P, *r.witness)), "witness residual does not vanish");
        const int pr = e.prec();
        const ThemeElement known = ThemeElement::basis(3, pr, 2, TruncSeries::one(pr)) -
                                   ThemeElement::basis(3, pr, 1, TruncSeries::monomial(q(g), 1, pr));
        c.expect(all_zero(apply_operator(e, P, known)), "e2 - gamma b e1 is not annihilated");
      }
  return c;
}

// 7. Rank-4 obstruction chain and the locus 3 alpha = 5 gamma.
Check rank4_obstruction() {
  Check c;
  const std::vector<long> ag = {1, 3, 5}, free_vals = {-1, 0, 2}, thetas = {1, 2, 7};
  for (long al : ag)
    for (long ga : ag)
      for (long be : free_vals)
        for (long de : free_vals)
          for (long ep : free_vals)
            for (long th : thetas) {
              const Rank4Data d{q(al), q(be), q(ga), q(de), q(ep), q(th)};
              const auto e = rank4(d);
              const InvarianceResult r = invariance_test(e);
              const bool inv = r.verdict == InvarianceResult::Verdict::Invariant;
              std::ostringstream tag;
              tag << " at alpha=" << al << " gamma=" << ga << " beta=" << be << " delta=" << de << " eps=" << ep
                  << " theta=" << th;
              c.expect(r.verdict != InvarianceResult::Verdict::Inconclusive, "inconclusive" + tag.str());
              c.expect(inv == (3 * al == 5 * ga), "wrong verdict" + tag.str());
              if (inv) {
                c.expect(all_zero(apply_operator(e, defining_operator(e), *r.witness)), "residual" + tag.str());
                continue;
              }
              // rho.gamma = sigma.theta and tau.gamma = sigma.alpha in the chain
              const auto names = r.cascade.names();
              auto index = [&](const std::string& n) {
                return static_cast<int>(std::find(names.begin(), names.end(), n) - names.begin());
              };
              const int rho = index("Y2.e1.b2"), sigma = index("Y3.e2.b1"), tau = index("Y4.e3.b1");
              bool seen_rho = false, seen_tau = false;
              std::optional<LinearForm> clash;
              IncrementalSystem before;
              for (const auto& con : r.cascade.constraints) {
                const auto& f = con.form;
                if (f.coeff(rho) != 0 && f.coeff(sigma) != 0 &&
                    f.coeff(rho) * q(th) == -f.coeff(sigma) * q(ga))
                  seen_rho = true;
                if (f.coeff(tau) != 0 && f.coeff(sigma) != 0 &&
                    f.coeff(tau) * q(al) == -f.coeff(sigma) * q(ga))
                  seen_tau = true;
                if (!clash && con.stage == 4 && con.component == 1 &&
                    con.kind == CascadeConstraint::Kind::ConstantTerm)
                  clash = f;
                if (!clash) before.add(f);
              }
              c.expect(seen_rho, "missing rho.gamma = sigma.theta" + tag.str());
              c.expect(seen_tau, "missing tau.gamma = sigma.alpha" + tag.str());
              c.expect(clash.has_value(), "missing the T(0) = U(0) constraint" + tag.str());
              if (!clash) continue;
              // T(0) = sigma/3 and U(0) = sigma(alpha/gamma - 1)/2 modulo the earlier constraints
              const LinearForm T0 = before.reduce(r.cascade.stages[2][0][0]);
              const LinearForm U0 = before.reduce(r.cascade.stages[3][1][0]);
              const LinearForm sig = before.reduce(LinearForm::variable(sigma));
              c.expect(T0 == sig * q(1, 3) || T0 == sig * q(-1, 3), "T(0) != +-sigma/3" + tag.str());
              const Rational u = (q(al) / q(ga) - 1) / 2;
              c.expect(U0 == sig * u || U0 == sig * (-u), "U(0) != +-sigma(alpha/gamma - 1)/2" + tag.str());
              c.expect((T0 == sig * q(1, 3)) == (U0 == sig * u), "T(0) and U(0) use different signs" + tag.str());
            }
  return c;
}

// 8. build -> embed -> bernstein -> invariants round trip.
Check round_trip() {
  Check c;
  Rng rng(808);
  const std::vector<Rational> l1s = {q(7, 2), q(4), q(9, 2)};
  for (int t = 0; t < 50; ++t) {
    const int k = static_cast<int>(rng.integer(1, 4));
    FundamentalInvariants inv{l1s[static_cast<std::size_t>(rng.integer(0, 2))], {}};
    for (int j = 1; j < k; ++j) inv.p.push_back(static_cast<int>(rng.integer(0, 3)));
    const CanonicalPoint pt = random_canonical_point(rng, inv, kPrec);
    const BuiltTheme th = build_theme(pt, kPrec);
    const XiElement phi = embed_into_xi(th.presentation);
    const BernsteinData bd = bernstein_from_generator(phi, k);
    const FundamentalInvariants back = invariants_from_bernstein(bd.element, phi.lambda());
    c.expect(back == inv, "round trip changed " + to_string(inv) + " into " + to_string(back));
  }
  return c;
}

// 9. The rank-2 parameter under triangular automorphism data.
Check parameter_invariance() {
  Check c;
  Rng rng(909);
  const std::vector<Rational> l1s = {q(5, 2), q(3), q(7, 2)};
  for (int t = 0; t < 20; ++t) {
    const Rational l1 = l1s[static_cast<std::size_t>(rng.integer(0, 2))];
    const int p = static_cast<int>(rng.integer(1, 3));
    TruncSeries s = rng.series(kPrec, 6);
    s.set(0, 1);
    s.set(p, rng.nonzero());
    const ThemePresentation e({l1, {p}}, {s}, kPrec);
    const Rational alpha = parameter_of_rank2(e);
    for (int u = 0; u < 10; ++u) {
      // eps1 = c.e1, eps2 = v.e2 + W.e1 gives R' = (v.R + b(b W' - (p-1) W)) / c
      const Rational v = rng.nonzero(), cc = rng.nonzero();
      const TruncSeries W = rng.series(kPrec, 6);
      const TruncSeries bw = W.b2_derivative() - Rational(p - 1) * W.shift_up(1);
      TruncSeries R = (v * s + bw) * (1 / cc);
      R = R * (1 / R[0]);
      const ThemePresentation f({l1, {p}}, {R}, kPrec);
      c.expect(parameter_of_rank2(f) == alpha, "parameter changed under automorphism data");
      const IsomorphismResult iso = isomorphism_test(e, f);
      c.expect(iso.verdict == IsomorphismResult::Verdict::Isomorphic, "transformed presentation not isomorphic");
    }
  }
  return c;
}

// 10. canonical_space shapes.
Check canonical_shapes() {
  Check c;
  const CanonicalSpace s0 = canonical_space({q(5, 2), {0}});
  c.expect(s0.is_point() && s0.shape() == "point", "S(l1, 0) is not a point");
  const CanonicalSpace s1 = canonical_space({q(7, 2), {3}});
  c.expect(s1.shape() == "C*" && s1.punctured_dim == 1 && s1.affine_dim == 0, "S(l1, p1) is not C*");
  const CanonicalSpace s2 = canonical_space({q(5, 2), {1, 1}});
  c.expect(s2.shape() == "(C*)^2 x C", "S(l, 1, 1) is not (C*)^2 x C");
  c.expect(s2.factors.size() == 2 && s2.factors[0].q == 2 && s2.factors[1].q == 1, "(q1, q2) != (2, 1)");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"commutation suite in Xi_(1/2)^(3)", commutation},
      {"rank-2 canonical form and c(lambda1, p)", rank2_canonical},
      {"chi-equation oracle", chi_equation},
      {"Bernstein jump at z = 0", bernstein_jump},
      {"rank-3 isomorphism table", rank3_isomorphism},
      {"rank-3 invariance locus", rank3_invariance},
      {"rank-4 obstruction chain", rank4_obstruction},
      {"invariants round trip", round_trip},
      {"rank-2 parameter invariance", parameter_invariance},
      {"canonical-space shapes", canonical_shapes},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "exception: " << e.what();
    }
    std::printf("criterion %2zu: %s  %s", i + 1, c.ok ? "PASS" : "FAIL", criteria[i].first);
    if (!c.ok) std::printf("  (%s)", c.detail.str().c_str());
    std::printf("\n");
    if (!c.ok) ++failed;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu criteria, %d failed, %.2f s\n", criteria.size(), failed, secs);
  return failed == 0 ? 0 : 1;
}
