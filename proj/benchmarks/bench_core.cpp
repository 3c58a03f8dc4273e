#include <benchmark/benchmark.h>

#include <random>

#include "cxtomo/analysis.hpp"
#include "cxtomo/model.hpp"
#include "cxtomo/parallel.hpp"
#include "cxtomo/solvers.hpp"

using namespace cxtomo;

namespace {

Vector random_vector(Eigen::Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = gauss(rng);
  return v;
}

GridSpec production() { return make_grid(51, 7, 2, 40); }

}  // namespace

static void BM_PropagatorApply(benchmark::State& state) {
  const GridSpec g = make_grid(static_cast<int>(state.range(0)), 7, 2, 40);
  const WavePropagator w(g);
  Image u(random_vector(g.num_pixels(), 1));
  for (auto _ : state) {
    u = w.apply(u);
    benchmark::DoNotOptimize(u.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.num_pixels());
}
BENCHMARK(BM_PropagatorApply)->Arg(51)->Arg(101)->Arg(201);

static void BM_ForwardSolve(benchmark::State& state) {
  const GridSpec g = production();
  const WavePropagator w(g);
  const Image f(random_vector(g.num_pixels(), 2));
  for (auto _ : state) {
    auto u = w.solve_forward(f);
    benchmark::DoNotOptimize(u.values.data());
  }
}
BENCHMARK(BM_ForwardSolve);

static void BM_EnumerateRays(benchmark::State& state) {
  const GridSpec g = production();
  const DetectorMask mask = full_mask(g);
  for (auto _ : state) {
    auto rays = enumerate_rays(g, mask);
    benchmark::DoNotOptimize(rays.data());
  }
}
BENCHMARK(BM_EnumerateRays)->Unit(benchmark::kMillisecond);

static void BM_RayApply(benchmark::State& state) {
  const GridSpec g = production();
  const RaySystem sys = build_ray_system(g, full_mask(g));
  const Vector u = random_vector(g.num_voxels(), 3);
  for (auto _ : state) {
    auto b = ray_apply(sys, u);
    benchmark::DoNotOptimize(b.data());
  }
  state.SetItemsProcessed(state.iterations() * sys.matrix.nnz());
}
BENCHMARK(BM_RayApply)->Unit(benchmark::kMillisecond);

static void BM_ModelApplyPair(benchmark::State& state) {
  const GridSpec g = production();
  const ForwardModel model = make_forward_model(g, mask_from_label(g, "7x7"));
  const Vector f = random_vector(model.cols(), 4);
  for (auto _ : state) {
    auto atb = model.apply_adjoint(model.apply(f));
    benchmark::DoNotOptimize(atb.data());
  }
}
BENCHMARK(BM_ModelApplyPair);

static void BM_LsqrIterations(benchmark::State& state) {
  const GridSpec g = production();
  const ForwardModel model = make_forward_model(g, mask_from_label(g, "7x7"));
  const Vector b = random_vector(model.rows(), 5);
  for (auto _ : state) {
    auto history = lsqr(model_operator(model), b, state.range(0));
    benchmark::DoNotOptimize(history.final.values.data());
  }
}
BENCHMARK(BM_LsqrIterations)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_GramColumn(benchmark::State& state) {
  const GridSpec g = production();
  const ForwardModel model = make_forward_model(g, mask_from_label(g, "21x21"));
  Vector unit = Vector::Zero(model.cols());
  unit[model.cols() / 2] = 1.0;
  for (auto _ : state) {
    auto col = model.apply_adjoint(model.apply(unit));
    benchmark::DoNotOptimize(col.data());
  }
}
BENCHMARK(BM_GramColumn);

BENCHMARK_MAIN();
