#include <benchmark/benchmark.h>

#include "eschlab/eschenburg.hpp"
#include "eschlab/wilking.hpp"

namespace {

using namespace esch;

void BM_Classify(benchmark::State& state) {
  const PQPair pair = PQPair::make({0, 0, 3}, {1, 1, 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(pair));
  }
}
BENCHMARK(BM_Classify);

void BM_CanonicalForm(benchmark::State& state) {
  const PQPair pair = PQPair::make({0, 1, 1}, {0, 0, 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_form(pair, MoveSet::AllDiffeos));
  }
}
BENCHMARK(BM_CanonicalForm);

void BM_HaarSample(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(haar_su3(rng));
  }
}
BENCHMARK(BM_HaarSample);

void BM_OracleConstruction(benchmark::State& state) {
  const LeftInvariantMetric metric = LeftInvariantMetric::deformed(1.0);
  for (auto _ : state) {
    CurvatureOracle oracle(metric);
    benchmark::DoNotOptimize(oracle);
  }
}
BENCHMARK(BM_OracleConstruction);

void BM_SectionalCurvature(benchmark::State& state) {
  const CurvatureOracle oracle(LeftInvariantMetric::deformed(1.0));
  Rng rng(2);
  const Su3Vector x = random_su3_vector(rng);
  const Su3Vector y = random_su3_vector(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.sectional(x, y));
  }
}
BENCHMARK(BM_SectionalCurvature);

void BM_BuildCertificate(benchmark::State& state) {
  const PQPair flat = PQPair::make({0, 0, 2}, {0, 1, 1});
  const CurvatureOracle oracle(LeftInvariantMetric::deformed(1.0));
  Rng rng(3);
  const SU3Point a = haar_su3(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_certificate(a, flat, 1.0, oracle));
  }
}
BENCHMARK(BM_BuildCertificate);

void BM_WilkingCertificate(benchmark::State& state) {
  const Triple q{3, 1, -2};
  const CurvatureOracle oracle(LeftInvariantMetric::deformed(1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_wilking_certificate(1.27, 0.6, q, 1.0, oracle));
  }
}
BENCHMARK(BM_WilkingCertificate);

void BM_SolveY1Horizontality(benchmark::State& state) {
  const PQPair pair = PQPair::make({0, 0, 3}, {1, 1, 1});
  Rng rng(4);
  const SU3Point a = haar_su3(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_y1_horizontality(a, pair));
  }
}
BENCHMARK(BM_SolveY1Horizontality);

}  // namespace

BENCHMARK_MAIN();
