#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "sector_blowup/elliptic.hpp"
#include "sector_blowup/evolve.hpp"
#include "sector_blowup/presets.hpp"
#include "sector_blowup/sector_green.hpp"

namespace sb = sector_blowup;

static void BM_StreamNumerov(benchmark::State& state) {
  const auto grid = sb::make_grid(M_PI / 4.0, state.range(0));
  const auto g = sb::ThetaField::sample(
      grid, sb::Parity::Odd, [](double t) { return std::sin(2.0 * t); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(sb::solve_stream_numerov(g));
  }
}
BENCHMARK(BM_StreamNumerov)->Arg(257)->Arg(513)->Arg(1025);

static void BM_StreamKernel(benchmark::State& state) {
  const auto grid = sb::make_grid(M_PI / 4.0, state.range(0));
  const auto g = sb::ThetaField::sample(
      grid, sb::Parity::Odd, [](double t) { return std::sin(2.0 * t); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(sb::solve_stream_kernel(g));
  }
}
BENCHMARK(BM_StreamKernel)->Arg(257)->Arg(513);

static void BM_EvolveStep(benchmark::State& state) {
  const auto grid = sb::make_grid(M_PI / 4.0, state.range(0));
  const auto pre = sb::make_preset_1d("blowup_quadratic", grid);
  const auto s0 = sb::init_state(pre.g0, pre.P0);
  const double dt = 0.5 * grid.spacing();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sb::step(s0, dt));
  }
}
BENCHMARK(BM_EvolveStep)->Arg(257)->Arg(513)->Arg(1025);

static void BM_GreenKernelP(benchmark::State& state) {
  const sb::SectorSpec spec(0.4);
  const std::complex<double> z = std::polar(0.9, 0.5);
  double rr = 0.1;
  for (auto _ : state) {
    rr = rr < 2.0 ? rr + 1e-4 : 0.1;
    benchmark::DoNotOptimize(sb::kernel_P(spec, z, std::polar(rr, 0.8)));
  }
}
BENCHMARK(BM_GreenKernelP);

static void BM_HessianPsi(benchmark::State& state) {
  const sb::SectorSpec spec(0.25);
  const auto f = sb::make_sector_preset("constant_one", 0.25);
  sb::QuadratureSpec quad;
  quad.threads = 1;
  quad.radial_panels = 32;
  quad.angular_panels = 10;
  quad.gauss_order = 6;
  quad.singular_depth = 10;
  const std::complex<double> z = std::polar(1.0, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sb::hessian_psi(spec, f, quad, z));
  }
}
BENCHMARK(BM_HessianPsi);

BENCHMARK_MAIN();
