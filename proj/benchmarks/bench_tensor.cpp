#include <benchmark/benchmark.h>

#include "nsledger/galerkin_solver.hpp"
#include "nsledger/scenarios.hpp"
#include "nsledger/trilinear_form.hpp"

using namespace nsledger;

static void BM_BuildTensor(benchmark::State& state) {
  const auto basis = build_basis(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    TriadTensor tensor = build_tensor(basis);
    benchmark::DoNotOptimize(tensor.size());
  }
}
BENCHMARK(BM_BuildTensor)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_Advection(benchmark::State& state) {
  const auto basis = build_basis(static_cast<std::size_t>(state.range(0)));
  const TriadTensor tensor = build_tensor(basis);
  const SpectralField u = random_field(basis, 1);
  std::vector<double> out(basis->size());
  for (auto _ : state) {
    std::fill(out.begin(), out.end(), 0.0);
    accumulate_advection(tensor.entries(), u.coeffs(), u.coeffs(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["entries"] = static_cast<double>(tensor.size());
}
BENCHMARK(BM_Advection)->Arg(100)->Arg(200)->Arg(400);

static void BM_TrilinearEval(benchmark::State& state) {
  const auto basis = build_basis(static_cast<std::size_t>(state.range(0)));
  const TriadTensor tensor = build_tensor(basis);
  const SpectralField u = random_field(basis, 1);
  const SpectralField v = random_field(basis, 2);
  const SpectralField w = random_field(basis, 3);
  for (auto _ : state) benchmark::DoNotOptimize(b_eval(u, v, w, tensor));
}
BENCHMARK(BM_TrilinearEval)->Arg(100)->Arg(400);

static void BM_TaylorGreenRun(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const auto basis = build_basis(m);
  const TriadTensor tensor = build_tensor(basis);
  SolverConfig cfg;
  cfg.nu = 0.05;
  const SpectralField y0 = taylor_green_field(basis);
  for (auto _ : state) {
    Trajectory traj = simulate_nse(y0, Forcing{}, m, {0.0, 2.0}, cfg, tensor);
    benchmark::DoNotOptimize(traj.size());
  }
}
BENCHMARK(BM_TaylorGreenRun)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
