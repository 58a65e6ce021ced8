#include <benchmark/benchmark.h>

#include <array>
#include <random>
#include <string>
#include <vector>

#include "omdist/oracle.hpp"
#include "omdist/solver.hpp"

using namespace omdist;

namespace {

// Random satisfiable systems via a random ultrametric (see the acceptance
// suite for the construction).
ConstraintSet satisfiable_system(int n, long s, unsigned seed) {
  std::mt19937 rng(seed);
  const int depth = 6;
  std::vector<std::array<unsigned char, 6>> words(n);
  std::uniform_int_distribution<int> digit(0, 3);
  for (auto& w : words)
    for (int i = 0; i < depth; ++i) w[i] = static_cast<unsigned char>(digit(rng));
  auto first_diff = [&](int a, int b) {
    for (int i = 0; i < depth; ++i)
      if (words[a][i] != words[b][i]) return i;
    return depth;
  };
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "p" + std::to_string(i);
  ConstraintSet out;
  std::uniform_int_distribution<int> pick(0, n - 1);
  long added = 0;
  while (added < s) {
    int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
    if (a == b || c == d) continue;
    if (first_diff(a, b) <= first_diff(c, d)) continue;
    out.add_strict(names[a], names[b], names[c], names[d]);
    ++added;
  }
  return out;
}

ConstraintSet chain_system(int n) {
  ConstraintSet out;
  auto name = [](int i) { return "s" + std::to_string(i); };
  for (int i = 0; i + 2 < n; ++i)
    out.add_strict(name(i), name(i + 1), name(i + 1), name(i + 2));
  return out;
}

}  // namespace

static void BM_SolveFastRandom(benchmark::State& state) {
  const long s = state.range(0);
  ConstraintSet sys = satisfiable_system(10000, s, 1234);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fast(sys).consistent());
  }
  state.SetComplexityN(s);
}
BENCHMARK(BM_SolveFastRandom)
    ->Unit(benchmark::kMillisecond)
    ->RangeMultiplier(10)
    ->Range(10000, 1000000)
    ->Complexity();

static void BM_SolveFastChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ConstraintSet sys = chain_system(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fast(sys).consistent());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveFastChain)
    ->Unit(benchmark::kMillisecond)
    ->RangeMultiplier(2)
    ->Range(1000, 8000)
    ->Complexity();

static void BM_SolveNaiveChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ConstraintSet sys = chain_system(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(sys).consistent());
  }
}
BENCHMARK(BM_SolveNaiveChain)->Unit(benchmark::kMillisecond)->Range(250, 1000);

static void BM_OdRandomPoints(benchmark::State& state) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> exp2(-4, 8);
  std::vector<OmPoint> points;
  for (int i = 0; i < 256; ++i) {
    OmPoint p;
    for (int t = 0; t < 4; ++t)
      p = p + OmPoint::term(Int(coeff(rng) | 1), make_rat(exp2(rng), 2));
    points.push_back(p);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const OmPoint& a = points[i % points.size()];
    const OmPoint& b = points[(i * 7 + 3) % points.size()];
    benchmark::DoNotOptimize(od(a, b));
    ++i;
  }
}
BENCHMARK(BM_OdRandomPoints);

static void BM_EnumTrees(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::string> pool;
  for (int k = 0; k < n; ++k) pool.push_back(std::string(1, char('a' + k)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enum_trees(pool).size());
  }
}
BENCHMARK(BM_EnumTrees)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
