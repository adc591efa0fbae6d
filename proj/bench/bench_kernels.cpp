#include <benchmark/benchmark.h>

#include <random>

#include "specpert/kernels.hpp"
#include "specpert/sampling.hpp"

using namespace specpert;

namespace {

RowMatrix observations(Eigen::Index n, Eigen::Index p) {
  RandomStream s(SeedSpec{1}, 0, kRoleX);
  RowMatrix x(n, p);
  s.fill_normal(std::span<double>(x.data(), static_cast<std::size_t>(x.size())));
  return x;
}

Vector direction(Eigen::Index p) {
  RandomStream s(SeedSpec{2}, 0, kRoleX);
  Vector v(p);
  s.fill_normal(std::span<double>(v.data(), static_cast<std::size_t>(v.size())));
  return v;
}

template <Matrix (*Gram)(const RowMatrix&)>
void bm_gram(benchmark::State& state) {
  const RowMatrix x = observations(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(Gram(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Vector (*Apply)(const RowMatrix&, const Vector&)>
void bm_gram_apply(benchmark::State& state) {
  const RowMatrix x = observations(state.range(0), state.range(1));
  const Vector v = direction(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(Apply(x, v));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(bm_gram<kernels::gram_serial>)->Name("gram/serial")->Args({2000, 200})->Args({10000, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_gram<kernels::gram>)->Name("gram/openmp")->Args({2000, 200})->Args({10000, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(bm_gram_apply<kernels::gram_apply_serial>)->Name("gram_apply/serial")->Args({1000, 1000})->Args({10000, 1000})->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_gram_apply<kernels::gram_apply>)->Name("gram_apply/openmp")->Args({1000, 1000})->Args({10000, 1000})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
