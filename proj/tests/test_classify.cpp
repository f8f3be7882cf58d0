#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace themelab;
using namespace testsupport;

namespace {

using IV = IsomorphismResult::Verdict;
using NV = InvarianceResult::Verdict;

bool has_flag(const ScanRecord& r, const std::string& f) {
  return std::find(r.flags.begin(), r.flags.end(), f) != r.flags.end();
}

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("thematic rank") {
    const Rational lam = q(1, 2);
    const RankCertificate r1 = thematic_rank(XiElement::basis(lam, 0, 16, 0), 3);
    CHECK(r1.lower == 1);
    CHECK(r1.upper == 1);
    for (int k = 1; k <= 4; ++k) {
      const RankCertificate rk = thematic_rank(XiElement::basis(lam, k - 1, 24, k - 1), 4);
      CHECK(rk.lower == k);
      CHECK(rk.upper == k);
    }
    const XiExpression fam("log(s)*s^(1/2) + (z + b)*s^(-1/2)");
    for (long z : {-2, 0, 1, 3}) {
      const RankCertificate rz = thematic_rank(fam.evaluate({{"z", q(z)}}, 24), 4);
      CHECK(rz.lower == 2);
      CHECK(rz.upper == 2);
    }
  }

  TEST_CASE("is_k_thematic") {
    using V = ThematicResult::Verdict;
    CHECK(is_k_thematic(XiElement::basis(q(1, 2), 1, 16, 0), 2).verdict == V::No);
    CHECK(is_k_thematic(XiElement::basis(q(1, 2), 1, 16, 0), 1).verdict == V::Yes);
    Rng rng(51);
    const ThemePresentation e = build_theme(random_canonical_point(rng, {q(5, 2), {1, 1}}, 32), 32).presentation;
    const ThematicResult r = is_k_thematic(embed_into_xi(e), 3);
    CHECK(r.verdict == V::Yes);
    CHECK(r.relations.size() == 3);
    CHECK(is_k_thematic(embed_into_xi(e), 2).verdict == V::No);
  }

  TEST_CASE("solve_b_ode") {
    const BOdeResult r = solve_b_ode(1, S("1 + b^2", 8));
    REQUIRE(r.ok());
    CHECK(*r.solution == S("-1 + b^2", 8));
    CHECK(r.free_power == 1);
    const BOdeResult o = solve_b_ode(1, S("b", 8));
    CHECK_FALSE(o.ok());
    REQUIRE(o.obstruction);
    CHECK(o.obstruction->power == 1);
    CHECK(o.obstruction->value == 1);
    CHECK_FALSE(solve_b_ode(12, S("1", 8)).free_power);

    Rng rng(52);
    for (int t = 0; t < 30; ++t) {
      const int c = static_cast<int>(rng.integer(0, 6));
      TruncSeries rhs = rng.series(12, 10);
      rhs.set(c, 0);
      const BOdeResult s = solve_b_ode(c, rhs);
      REQUIRE(s.ok());
      const TruncSeries T = *s.solution;
      CHECK(T[c] == 0);
      for (int m = 0; m < T.prec(); ++m) CHECK(T[m] * (m - c) == rhs[m]);
    }
  }

  TEST_CASE("rank-2 constants and the chi equation") {
    CHECK(gamma_factor(q(7, 2), 3) == q(5, 2) * q(7, 2) * q(9, 2));
    CHECK(gamma_factor(q(7, 2), 0) == 1);
    CHECK(canonical_constant(q(7, 2), 3) == -q(5, 2) * q(7, 2) * q(9, 2) / 3);
    for (int p = 1; p <= 3; ++p) {
      const ChiSolution chi = solve_chi_equation(q(5, 2), p, q(3), 16, q(7));
      CHECK(chi.free_power == p);
      CHECK(chi.S == TruncSeries::constant(q(-1, p), chi.S.prec()) + TruncSeries::monomial(q(7), p, chi.S.prec()));
    }
    CHECK(solve_chi_equation(q(5, 2), 2, q(0), 16).rho == 0);
  }

  TEST_CASE("rank2_reduce") {
    const int P = 24;
    const Rational l1 = q(7, 2);
    const int p = 3;
    for (const Rational& alpha : {q(2), q(-1, 3), q(5)}) {
      const ThemePresentation e({l1, {p}}, {S("1", P) + TruncSeries::monomial(alpha, p, P)}, P);
      const Rank2Reduction r = rank2_reduce(embed_into_xi(e), l1, p);
      REQUIRE(r.alpha);
      CHECK(*r.alpha == alpha);
      const int n = r.generator.prec();
      const XiElement want = alpha * power_monomial(l1 + p - 1, 1, q(1, 2), 1, n) +
                             canonical_constant(l1, p) * power_monomial(l1 - 1, 0, q(1, 2), 1, n);
      CHECK(r.generator == want);
      const Rank2Reduction again = rank2_reduce(r.generator, l1, p);
      CHECK(again.alpha == r.alpha);
    }
    // unit multiples of a generator give the same parameter
    Rng rng(53);
    const ThemePresentation e({l1, {p}}, {S("1 + 2*b^3", P)}, P);
    const XiElement phi = embed_into_xi(e);
    CHECK(*rank2_reduce(rng.unit(phi.prec(), 4) * phi, l1, p).alpha == 2);

    const ThemePresentation e0({l1, {0}}, {S("1", P)}, P);
    const Rank2Reduction r0 = rank2_reduce(embed_into_xi(e0), l1, 0);
    CHECK_FALSE(r0.alpha);
    CHECK(r0.generator == (l1 - 1) * power_monomial(l1 - 1, 1, q(1, 2), 1, r0.generator.prec()));
    CHECK_THROWS_AS(rank2_reduce(phi, l1, 2), WrongInvariants);
  }

  TEST_CASE("parameter_of_rank2") {
    CHECK(parameter_of_rank2(ThemePresentation({q(5, 2), {2}}, {S("1 + 3*b + 4*b^2")})) == 4);
    CHECK_THROWS_AS(parameter_of_rank2(ThemePresentation({q(5, 2), {2}}, {S("2 + 4*b^2")})), NotNormalized);
    CHECK_THROWS(parameter_of_rank2(rank3(q(1), q(1), q(1))));
  }

  TEST_CASE("isomorphism is reflexive and symmetric") {
    Rng rng(54);
    for (const FundamentalInvariants& inv :
         {FundamentalInvariants{q(7, 2), {3}}, FundamentalInvariants{q(5, 2), {1, 1}},
          FundamentalInvariants{q(7, 2), {3, 2, 2}}}) {
      for (int t = 0; t < 3; ++t) {
        const ThemePresentation e = build_theme(random_canonical_point(rng, inv, 32), 32).presentation;
        const ThemePresentation f = build_theme(random_canonical_point(rng, inv, 32), 32).presentation;
        const IsomorphismResult self = isomorphism_test(e, e);
        CHECK(self.verdict == IV::Isomorphic);
        CHECK(witness_satisfies(e, e, self.witness));
        const IsomorphismResult ef = isomorphism_test(e, f);
        const IsomorphismResult fe = isomorphism_test(f, e);
        CHECK(ef.verdict == fe.verdict);
        if (ef.verdict == IV::Isomorphic) CHECK(witness_satisfies(e, f, ef.witness));
      }
    }
  }

  TEST_CASE("isomorphism agrees with brute force on the rank-3 family") {
    const std::vector<long> vals{1, 2};
    const std::vector<long> gams{0, 3};
    std::vector<ThemePresentation> pts;
    for (long a : vals)
      for (long b : vals)
        for (long g : gams) pts.push_back(rank3(q(a), q(b), q(g)));
    for (const auto& e : pts)
      for (const auto& f : pts) {
        const IsomorphismResult r = isomorphism_test(e, f);
        REQUIRE(r.verdict != IV::Inconclusive);
        CHECK((r.verdict == IV::Isomorphic) == brute_force_isomorphic(e, f).has_value());
        if (r.verdict == IV::NotIsomorphic) CHECK(r.distinguisher);
      }
  }

  TEST_CASE("invariance agrees with brute force") {
    for (long a = 1; a <= 3; ++a)
      for (long b = 1; b <= 3; ++b)
        for (long g : {0, 2}) {
          const ThemePresentation e = rank3(q(a), q(b), q(g));
          const InvarianceResult r = invariance_test(e);
          REQUIRE(r.verdict != NV::Inconclusive);
          CHECK((r.verdict == NV::Invariant) == brute_force_invariant(e));
          CHECK((r.verdict == NV::Invariant) == (a == b));
          if (r.witness) CHECK(all_zero(apply_operator(e, defining_operator(e), *r.witness)));
        }
    for (const Rank4Data& d : {Rank4Data{q(5), q(1), q(3), q(1), q(2), q(1)},
                               Rank4Data{q(1), q(2), q(3), q(4), q(5), q(6)},
                               Rank4Data{q(10, 3), q(1), q(2), q(1), q(1), q(1)}}) {
      const ThemePresentation e = rank4(d);
      const InvarianceResult r = invariance_test(e);
      REQUIRE(r.verdict != NV::Inconclusive);
      CHECK((r.verdict == NV::Invariant) == brute_force_invariant(e, 20, 4));
    }
  }

  TEST_CASE("low precision is reported, not guessed") {
    const ThemePresentation e = rank4({q(7, 2), q(3), q(1), q(2), q(3), q(7)}, 8);
    CHECK(invariance_test(e).verdict == NV::Inconclusive);
    CHECK(isomorphism_test(e, e).verdict == IV::Inconclusive);
  }

  TEST_CASE("grids") {
    CHECK(parse_range("1..3") == std::vector<Rational>{q(1), q(2), q(3)});
    CHECK(parse_range("-1..1 step 1/2").size() == 5);
    CHECK_THROWS(parse_range("3..1"));
    const auto g = make_grid({{"x", {q(1), q(2)}}, {"y", {q(0), q(5), q(7)}}});
    CHECK(g.size() == 6);
    CHECK(g.front().at("x") == 1);
    CHECK(g.front().at("y") == 0);
  }

  TEST_CASE("scan of the jump family") {
    const XiExpression fam("log(s)*s^(1/2) + (z + b)*s^(-1/2)");
    const auto grid = make_grid({{"z", parse_range("-2..2")}});
    const ScanReport one = scan_family(fam, grid, {24, 2, 1});
    const ScanReport many = scan_family(fam, grid, {24, 2, 3});
    REQUIRE(one.records.size() == 5);
    CHECK(one.jump);
    CHECK_FALSE(one.any_inconclusive);
    CHECK(one.strata.size() == 2);
    for (std::size_t i = 0; i < one.records.size(); ++i) {
      const bool at_zero = one.records[i].point.at("z") == 0;
      CHECK(has_flag(one.records[i], "bernstein-jump") == at_zero);
      CHECK(one.records[i].bernstein == many.records[i].bernstein);
    }
  }

  TEST_CASE("scan of a canonical family") {
    const ThemeFamily fam{{q(5, 2), {1, 1}}, {"1 + beta*b + gamma*b^2", "1 + alpha*b"}};
    const auto grid = make_grid({{"alpha", {q(1), q(2)}}, {"beta", {q(1), q(2)}}, {"gamma", {q(0), q(4)}}});
    const ScanReport r = scan_family(fam, grid, {32, 4, 2});
    CHECK_FALSE(r.jump);
    CHECK(r.strata.size() == 1);
    for (const auto& rec : r.records) {
      REQUIRE(rec.invariant);
      CHECK(*rec.invariant == (rec.point.at("alpha") == rec.point.at("beta")));
      REQUIRE(rec.invariants);
      CHECK(*rec.invariants == FundamentalInvariants{q(5, 2), {1, 1}});
    }
  }
}
