#include "hpimc/checks.hpp"
#include "hpimc/config.hpp"
#include "hpimc/propagators.hpp"
#include "hpimc/sparse_decomp.hpp"
#include "hpimc/tcf.hpp"
#include "hpimc/units.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hpimc;

namespace {

const DoubleWell kWell{units::kProtonMass, units::wavenumber_to_hartree(500.0),
                       units::wavenumber_to_hartree(1500.0)};

void BM_DecomposeAllDiagonals(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    for (int nu = 1; nu <= d; ++nu) {
      benchmark::DoNotOptimize(decompose_diagonal(d, nu, 1.0));
    }
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_DecomposeAllDiagonals)->RangeMultiplier(4)->Range(16, 1024);

void BM_OneSparseExp(benchmark::State& state) {
  const Index d = state.range(0);
  std::mt19937_64 rng(3);
  const auto m = random_one_sparse(d, rng);
  StateVector psi = StateVector::Ones(d);
  for (auto _ : state) {
    apply_exp_one_sparse_inplace(m, 0.1, TimeKind::real_time, psi);
    benchmark::DoNotOptimize(psi.data());
  }
}
BENCHMARK(BM_OneSparseExp)->RangeMultiplier(8)->Range(32, 32768);

void BM_StepMatrix(benchmark::State& state) {
  const auto grid = make_grid(30.0, static_cast<int>(state.range(0)));
  SchemeOptions options;
  options.imag_ell = static_cast<int>(state.range(1));
  const PropagatorContext context(grid, kWell, kWell.mass, StepScheme(options, 5000.0, 900.0, 40));
  for (auto _ : state) {
    benchmark::DoNotOptimize(context.step_matrix(PathDirection::forward));
  }
}
BENCHMARK(BM_StepMatrix)->Args({6, 4})->Args({7, 16})->Args({8, 0})->Unit(benchmark::kMillisecond);

void BM_TcfPoint(benchmark::State& state) {
  const auto grid = make_grid(30.0, static_cast<int>(state.range(0)));
  const TrotterSetup setup{grid, kWell, kWell.mass, SchemeOptions{}, 80, 900.0, std::nullopt, 1};
  const Eigen::VectorXd x = grid.positions();
  for (auto _ : state) {
    benchmark::DoNotOptimize(trotterized_tcf(setup, x, x, {0.0, 5000.0}));
  }
}
BENCHMARK(BM_TcfPoint)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
