#include "proxkit/problems.hpp"
#include "proxkit/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using proxkit::Index;
using proxkit::LinearOperator;
using proxkit::Matrix;
using proxkit::Vector;

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  return m;
}

Vector random_vector(Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

void BM_ForwardBackwardLasso(benchmark::State& state) {
  const Index n = state.range(0);
  const auto lasso = proxkit::build_lasso(LinearOperator(random_matrix(2 * n, n, 1)), random_vector(2 * n, 2) * 5.0);
  const auto cfg = lasso.config({200, 1e-300, 200});
  for (auto _ : state) benchmark::DoNotOptimize(proxkit::forward_backward(lasso.f, lasso.g, Vector::Zero(n), cfg));
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_ForwardBackwardLasso)->Arg(16)->Arg(64)->Arg(256);

void BM_FistaLasso(benchmark::State& state) {
  const Index n = state.range(0);
  const auto lasso = proxkit::build_lasso(LinearOperator(random_matrix(2 * n, n, 1)), random_vector(2 * n, 2) * 5.0);
  const auto cfg = lasso.config({200, 1e-300, 200});
  for (auto _ : state) benchmark::DoNotOptimize(proxkit::fista(lasso.f, lasso.g, Vector::Zero(n), cfg));
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_FistaLasso)->Arg(16)->Arg(64)->Arg(256);

void BM_PowerIteration(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix m = random_matrix(n, n, 3);
  for (auto _ : state) {
    // A fresh operator each time so the norm cache is cold.
    const LinearOperator L(m);
    benchmark::DoNotOptimize(L.estimate_norm());
  }
}
BENCHMARK(BM_PowerIteration)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
