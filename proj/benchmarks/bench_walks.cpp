#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "gw/boundary.hpp"
#include "gw/group_walks.hpp"
#include "gw/operators.hpp"

namespace {

using namespace gw;

template <class S>
GroupMeasure<IntegerGroup, S> lazy_walk() {
  GroupMeasure<IntegerGroup, S> mu;
  mu.add(0, scalar_traits<S>::from_ratio(1, 2));
  mu.add(-1, scalar_traits<S>::from_ratio(1, 4));
  mu.add(1, scalar_traits<S>::from_ratio(1, 4));
  return mu;
}

template <class S>
void BM_ConvolutionSweepZ(benchmark::State& state) {
  IntegerGroup z;
  const auto mu = lazy_walk<S>();
  const long horizon = state.range(0);
  for (auto _ : state) {
    auto sweep = convolution_power_sweep(mu, horizon, 1LL, z);
    benchmark::DoNotOptimize(sweep.values.back());
  }
}
BENCHMARK(BM_ConvolutionSweepZ<double>)->Arg(32)->Arg(64);
BENCHMARK(BM_ConvolutionSweepZ<Rational>)->Arg(32)->Arg(64);

std::shared_ptr<const FiniteGroupoid> translation_groupoid(int n) {
  ActionSpec spec;
  spec.group.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) spec.group[a][b] = (a + b) % n;
  }
  spec.action = spec.group;
  return std::make_shared<const FiniteGroupoid>(build_action_groupoid(spec));
}

template <class S>
EquivariantOperator<S> smoothed_operator(const std::shared_ptr<const FiniteGroupoid>& g,
                                         std::mt19937_64& rng) {
  FibredSystem<S> sys(g->object_count());
  std::uniform_int_distribution<int> mass(1, 4);
  for (ObjectId x = 0; x < g->object_count(); ++x) {
    long long total = 0;
    std::vector<int> raw;
    for (MorphismId m : g->fibre(x)) {
      (void)m;
      raw.push_back(mass(rng));
      total += raw.back();
    }
    std::size_t i = 0;
    for (MorphismId m : g->fibre(x)) {
      sys.at(x).set(m, scalar_traits<S>::from_ratio(raw[i++], total));
    }
  }
  return EquivariantOperator<S>(g, std::move(sys));
}

template <class S>
void BM_MeanDiscrepancy(benchmark::State& state) {
  auto g = translation_groupoid(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(7);
  auto p = smoothed_operator<S>(g, rng);
  const auto ref = reference_measure<S>(*g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_discrepancy(ref, p));
  }
}
BENCHMARK(BM_MeanDiscrepancy<double>)->Arg(8)->Arg(16);
BENCHMARK(BM_MeanDiscrepancy<Rational>)->Arg(8)->Arg(16);

template <class S>
void BM_TailProfile(benchmark::State& state) {
  auto g = translation_groupoid(8);
  std::mt19937_64 rng(11);
  auto p = smoothed_operator<S>(g, rng);
  const long horizon = state.range(0);
  for (auto _ : state) {
    auto profile = tail_triviality_profile(p, 0, horizon);
    benchmark::DoNotOptimize(profile.values.back());
  }
}
BENCHMARK(BM_TailProfile<double>)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
