#include <benchmark/benchmark.h>

#include <cmath>

#include "hisd/dynamics.hpp"
#include "hisd/linalg.hpp"
#include "hisd/surfaces.hpp"

namespace {

using namespace hisd;

SchemeParams params(double tau, std::size_t k) {
  SchemeParams p;
  p.tau = tau;
  p.k = k;
  return p;
}

void BM_StepOneDirection(benchmark::State& state) {
  const MinyaevQuapp mq;
  const SaddleState s(0.0, Point(Vec{1.0, 1.0}), DirectionFrame({{0.0, 1.0}}));
  const SchemeParams p = params(1.0 / 256, 1);
  for (auto _ : state) {
    StepRecord rec = step_hisd(s, p, mq);
    benchmark::DoNotOptimize(rec);
  }
}
BENCHMARK(BM_StepOneDirection);

void BM_StepTwoDirections(benchmark::State& state) {
  const MinyaevQuapp mq;
  const SaddleState s(0.0, Point(Vec{1.0, 1.0}),
                      DirectionFrame({{0.0, 1.0}, {1.0, 0.0}}));
  const SchemeParams p = params(1.0 / 256, 2);
  for (auto _ : state) {
    StepRecord rec = step_hisd(s, p, mq);
    benchmark::DoNotOptimize(rec);
  }
}
BENCHMARK(BM_StepTwoDirections);

void BM_GramSchmidtPair(benchmark::State& state) {
  const std::vector<Vec> tilde = {{0.9999, 0.0141}, {-0.0143, 1.0002}};
  for (auto _ : state) {
    GramSchmidtResult r = gram_schmidt(tilde);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_GramSchmidtPair);

void BM_TrajectoryUnitTime(benchmark::State& state) {
  const MinyaevQuapp mq;
  const SaddleState s(0.0, Point(Vec{1.0, 1.0}), DirectionFrame({{0.0, 1.0}}));
  const SchemeParams p = params(1.0 / 256, 1);
  for (auto _ : state) {
    Trajectory t = run_trajectory(s, p, mq, 1.0);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_TrajectoryUnitTime);

void BM_SurfaceDerivatives(benchmark::State& state) {
  const Eckhardt eck;
  const Point x(Vec{-1.3, 0.7});
  for (auto _ : state) {
    Vec f = eck.force(x);
    Matrix j = eck.neg_hessian(x);
    benchmark::DoNotOptimize(f);
    benchmark::DoNotOptimize(j);
  }
}
BENCHMARK(BM_SurfaceDerivatives);

}  // namespace

BENCHMARK_MAIN();
