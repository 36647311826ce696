#include <benchmark/benchmark.h>

#include "cuspmass/eigenform.hpp"
#include "cuspmass/lvalues.hpp"
#include "cuspmass/mass.hpp"
#include "cuspmass/oscillatory.hpp"
#include "cuspmass/special.hpp"
#include "cuspmass/verification.hpp"

using namespace cuspmass;

namespace {

const eigen::EigenBasis& delta_basis() {
  static const eigen::EigenBasis B = [] {
    eigen::EigenOptions o;
    o.cache_dir = eigen::default_cache_dir();
    return eigen::hecke_eigenbasis(12, 80000, o);
  }();
  return B;
}

void BM_LogGamma(benchmark::State& state) {
  const std::complex<double> z(3.7, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(special::log_gamma(z));
}
BENCHMARK(BM_LogGamma)->Arg(1)->Arg(1000);

void BM_BesselJ(benchmark::State& state) {
  const int nu = static_cast<int>(state.range(0));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::bessel_j(nu, x));
    x = x < 500.0 ? x * 1.07 : 0.5;
  }
}
BENCHMARK(BM_BesselJ)->Arg(11)->Arg(47);

void BM_Kloosterman(benchmark::State& state) {
  const auto c = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(special::kloosterman(3, 7, c));
}
BENCHMARK(BM_Kloosterman)->Arg(97)->Arg(1000);

void BM_CutoffW(benchmark::State& state) {
  const lvalues::CutoffW W({12, 12});
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(W(x));
    x = x < 2000.0 ? x * 1.1 : 0.1;
  }
}
BENCHMARK(BM_CutoffW);

void BM_VoronoiKernelBuild(benchmark::State& state) {
  verify::VoronoiSetup s;
  for (auto _ : state) benchmark::DoNotOptimize(verify::VoronoiKernel(s).t_max());
}
BENCHMARK(BM_VoronoiKernelBuild)->Unit(benchmark::kMillisecond);

void BM_VoronoiKernelEval(benchmark::State& state) {
  const verify::VoronoiKernel K(verify::VoronoiSetup{});
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(K(x, 1));
    x = x < 1000.0 ? x * 1.3 : 1.0;
  }
}
BENCHMARK(BM_VoronoiKernelEval)->Unit(benchmark::kMicrosecond);

void BM_OscillatoryQuadrature(benchmark::State& state) {
  const auto g = osc::quadratic_gaussian_case(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(osc::oscillatory_quadrature(g.w, g.h, 1e-12));
}
BENCHMARK(BM_OscillatoryQuadrature)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EvaluateF(benchmark::State& state) {
  const mass::FormEvaluator F(*delta_basis()[0]);
  const std::complex<double> z(0.21, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(F(z));
}
BENCHMARK(BM_EvaluateF);

}  // namespace

BENCHMARK_MAIN();
