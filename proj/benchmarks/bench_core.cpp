#include <benchmark/benchmark.h>

#include "maval/polynomial.hpp"

using namespace maval;

static void BM_PolynomialMultiply(benchmark::State& state) {
  auto reg = VariableRegistry::matrix(3, 3);
  Polynomial p(reg), q(reg);
  for (uint32_t i = 0; i < reg->size(); ++i) {
    p.add_term(Monomial::var(i, 2), GaussianRational(Rational(i + 1, 3)));
    q.add_term(Monomial::var(i, 1) * Monomial::var((i + 1) % reg->size(), 1), GaussianRational(1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(p * q);
}
BENCHMARK(BM_PolynomialMultiply);

BENCHMARK_MAIN();
