#include <benchmark/benchmark.h>

#include "bfdarcy/verification.hpp"

using namespace bfdarcy;

namespace {

PhysicalParams params() { return {1.0, 10.0, 3.0, isotropic(1.0), isotropic(0.1)}; }

struct Fixture {
  explicit Fixture(int nx)
      : problem(manufactured_example1(example1_geometry(), params())),
        disc(generate_stacked_rect(example1_geometry(), nx, nx, nx), problem.data, ConstraintMode::exact),
        iterate(initial_iterate(disc, {0.1, 0.0})) {}

  ManufacturedProblem problem;
  Discretization disc;
  Vector iterate;
};

void BM_AssembleNewtonSystem(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const Vector load = assemble_load(f.disc, f.problem.data);
  for (auto _ : state) {
    auto sys = assemble_newton_system(f.disc, params(), load, f.iterate);
    benchmark::DoNotOptimize(sys.rhs.data());
  }
  state.counters["dofs"] = f.disc.dofs().size;
}
BENCHMARK(BM_AssembleNewtonSystem)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AssembleLoad(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Vector load = assemble_load(f.disc, f.problem.data);
    benchmark::DoNotOptimize(load.data());
  }
}
BENCHMARK(BM_AssembleLoad)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LinearSolve(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const auto sys = assemble_newton_system(f.disc, params(), f.problem.data, f.iterate);
  const SparseMatrix a = sys.matrix();
  const auto backend = static_cast<LinearBackend>(state.range(1));
  for (auto _ : state) {
    Vector x = solve_newton_system(a, sys.rhs, f.disc.dofs(), backend);
    benchmark::DoNotOptimize(x.data());
  }
  state.counters["dofs"] = f.disc.dofs().size;
}
BENCHMARK(BM_LinearSolve)
    ->Args({8, static_cast<int>(LinearBackend::dense)})
    ->Args({8, static_cast<int>(LinearBackend::sparse)})
    ->Args({16, static_cast<int>(LinearBackend::sparse)})
    ->Args({32, static_cast<int>(LinearBackend::sparse)})
    ->Unit(benchmark::kMillisecond);

void BM_NewtonSolve(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto res = newton_solve(f.disc, params(), f.problem.data);
    benchmark::DoNotOptimize(res.solution.coeffs.data());
    state.counters["iterations"] = res.report.iterations;
  }
}
BENCHMARK(BM_NewtonSolve)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
