#include "proxkit/prox_function.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using proxkit::ConvexSet;
using proxkit::Index;
using proxkit::ProxFunction;
using proxkit::Vector;

Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

void run_prox(benchmark::State& state, const ProxFunction& f) {
  const Vector x = random_vector(f.dim(), 7);
  for (auto _ : state) benchmark::DoNotOptimize(f.prox(0.5, x));
  state.SetItemsProcessed(state.iterations() * f.dim());
}

void BM_ProxL1(benchmark::State& state) { run_prox(state, ProxFunction::l1(state.range(0))); }
BENCHMARK(BM_ProxL1)->Range(8, 4096);

void BM_ProxElasticNet(benchmark::State& state) {
  run_prox(state, ProxFunction::l1_plus_quadratic(state.range(0), 0.5));
}
BENCHMARK(BM_ProxElasticNet)->Range(8, 4096);

void BM_ProjectBall(benchmark::State& state) {
  const Index n = state.range(0);
  run_prox(state, ProxFunction::indicator(ConvexSet::ball(Vector::Zero(n), 1.0)));
}
BENCHMARK(BM_ProjectBall)->Range(8, 4096);

void BM_ProjectBox(benchmark::State& state) {
  const Index n = state.range(0);
  run_prox(state, ProxFunction::indicator(ConvexSet::box(-Vector::Ones(n), Vector::Ones(n))));
}
BENCHMARK(BM_ProjectBox)->Range(8, 4096);

void BM_ProxSupportBall(benchmark::State& state) {
  const Index n = state.range(0);
  run_prox(state, ProxFunction::support(ConvexSet::ball(Vector::Zero(n), 1.0)));
}
BENCHMARK(BM_ProxSupportBall)->Range(8, 4096);

void BM_ProxConjugateL1(benchmark::State& state) {
  run_prox(state, ProxFunction::conjugate(ProxFunction::l1(state.range(0))));
}
BENCHMARK(BM_ProxConjugateL1)->Range(8, 4096);

}  // namespace
