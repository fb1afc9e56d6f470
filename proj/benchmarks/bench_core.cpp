#include <benchmark/benchmark.h>

#include <marchuk/certificate.hpp>
#include <marchuk/lyapunov.hpp>
#include <marchuk/system.hpp>
#include <marchuk/verify.hpp>

namespace {

using namespace marchuk;

HistoryFunction small_history(const ModelParameters& p) {
  Vector v(kStateDim, 1e-3);
  v[9] = 0.0;
  return HistoryFunction::constant(v, p.tau_max());
}

void BM_BuildCertificate(benchmark::State& state) {
  const auto p = ModelParameters::desk_default();
  const auto c = default_choices(p);
  for (auto _ : state) benchmark::DoNotOptimize(build_certificate(p, c));
}
BENCHMARK(BM_BuildCertificate);

void BM_SimulateModel(benchmark::State& state) {
  const auto p = ModelParameters::desk_default();
  const auto psi = small_history(p);
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_model(p, XiFunction::linear(), Frame::shifted, psi, t_end));
  }
}
BENCHMARK(BM_SimulateModel)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_FunctionalInitial(benchmark::State& state) {
  const auto p = ModelParameters::desk_default();
  const auto cert = build_certificate(p, default_choices(p));
  const auto psi = small_history(p);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eval_functional_initial(cert, psi, n));
}
BENCHMARK(BM_FunctionalInitial)->Arg(16)->Arg(64)->Arg(256);

void BM_CheckBasin(benchmark::State& state) {
  const auto p = ModelParameters::desk_default();
  const auto cert = build_certificate(p, default_choices(p));
  const auto psi = small_history(p);
  const auto v0 = eval_functional_initial(cert, psi);
  for (auto _ : state) benchmark::DoNotOptimize(check_basin(cert, psi, cert.choices, v0));
}
BENCHMARK(BM_CheckBasin);

void BM_Verify(benchmark::State& state) {
  const auto p = ModelParameters::desk_default();
  const auto psi = small_history(p);
  NumericsConfig numerics;
  numerics.step = default_step(p);
  numerics.output_grid_spacing = numerics.step;
  numerics.t_end = 50.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_verification(p, XiFunction::linear(), default_choices(p), psi, numerics));
  }
}
BENCHMARK(BM_Verify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
