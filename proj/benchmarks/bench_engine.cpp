#include <benchmark/benchmark.h>

#include "themelab/classify.hpp"
#include "themelab/theme.hpp"

using namespace themelab;

namespace {

ThemePresentation rank4_point(int prec) {
  const auto s = [&](const char* t) { return parse_series(t, prec); };
  return ThemePresentation({make_rational(7, 2), {3, 2, 2}},
                           {s("1 + 2*b + 3*b^2 + 7*b^3"), s("1 + 4*b + 3*b^2"), s("1 + 5*b^2")}, prec);
}

void BM_OreMul(benchmark::State& state) {
  const int prec = static_cast<int>(state.range(0));
  const OreOperator x = parse_operator("(a - 5/2*b)*inv(1 + 2*b^3)*(a - 7/2*b)", prec);
  const OreOperator y = parse_operator("(1 + b + b^2)*a^2 - 3*b*a + b^2", prec);
  for (auto _ : state) benchmark::DoNotOptimize(ore_mul(x, y));
}
BENCHMARK(BM_OreMul)->Arg(16)->Arg(32)->Arg(64);

void BM_EmbedIntoXi(benchmark::State& state) {
  const ThemePresentation e = rank4_point(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(embed_into_xi(e));
}
BENCHMARK(BM_EmbedIntoXi)->Arg(16)->Arg(32)->Arg(64);

void BM_BernsteinRank4(benchmark::State& state) {
  const XiElement phi = embed_into_xi(rank4_point(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(bernstein_from_generator(phi, 4));
}
BENCHMARK(BM_BernsteinRank4)->Arg(32)->Arg(48);

void BM_InvarianceRank4(benchmark::State& state) {
  const ThemePresentation e = rank4_point(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(invariance_test(e));
}
BENCHMARK(BM_InvarianceRank4)->Arg(16)->Arg(32);

void BM_IsomorphismRank3(benchmark::State& state) {
  const int prec = static_cast<int>(state.range(0));
  const FundamentalInvariants inv{make_rational(5, 2), {1, 1}};
  const ThemePresentation e(inv, {parse_series("1 + 2*b + 7*b^2", prec), parse_series("1 + b", prec)}, prec);
  const ThemePresentation f(inv, {parse_series("1 + 2*b", prec), parse_series("1 + b", prec)}, prec);
  for (auto _ : state) benchmark::DoNotOptimize(isomorphism_test(e, f));
}
BENCHMARK(BM_IsomorphismRank3)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
