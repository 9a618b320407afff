#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "arraycap/capacity.hpp"
#include "arraycap/hermitian_eigen.hpp"

using namespace arraycap;

namespace {

std::vector<double> azimuths(int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(2 * std::numbers::pi * i / n);
  return out;
}

void BM_Whiten(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto g = build_circular(m, 0.03);
  const auto gamma = covariance_spherical_diffuse(pairwise_distances(g), 1000.0, 1.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(whiten(gamma));
}
BENCHMARK(BM_Whiten)->Arg(3)->Arg(6)->Arg(16)->Arg(64);

void BM_HermitianEigen(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {nd(rng), nd(rng)};
  const Eigen::MatrixXcd h = a * a.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigen(h));
}
BENCHMARK(BM_HermitianEigen)->Arg(4)->Arg(8)->Arg(32);

void BM_AzimuthScan(benchmark::State& state) {
  const ArraySetup setup{build_circular(6, 0.03), NoiseModel{SphericalDiffuseNoise{1.0, 0.01}, {}}, 343.0, nullptr, "bench"};
  const auto grid = azimuths(360);
  const SourceSpec source = FarField{Direction(0.0, std::numbers::pi / 2)};
  for (auto _ : state) benchmark::DoNotOptimize(azimuth_scan(setup, 1000.0, source, grid, 4.0));
}
BENCHMARK(BM_AzimuthScan);

void BM_BroadbandScan(benchmark::State& state) {
  const ArraySetup setup{build_circular(6, 0.03), NoiseModel{SphericalDiffuseNoise{1.0, 0.01}, {}}, 343.0, nullptr, "bench"};
  std::vector<double> freqs;
  for (int i = 0; i < 100; ++i) freqs.push_back(100.0 * std::pow(80.0, i / 99.0));
  const auto weights = SpectralWeights::uniform(freqs);
  const SourceSpec source = FarField{Direction(0.0, std::numbers::pi / 2)};
  const auto grid = azimuths(360);
  for (auto _ : state) benchmark::DoNotOptimize(broadband_scan(setup, source, grid, weights, 4.0));
}
BENCHMARK(BM_BroadbandScan)->Unit(benchmark::kMillisecond);

void BM_Quadrature(benchmark::State& state) {
  const auto g = build_circular(6, 0.03);
  const auto density = AngularDensity::isotropic(1.0 / (4 * std::numbers::pi));
  const QuadratureResolution res{static_cast<int>(state.range(0)), static_cast<int>(state.range(0) / 2)};
  for (auto _ : state) benchmark::DoNotOptimize(covariance_from_angular_density(g, 1000.0, density, 343.0, res));
}
BENCHMARK(BM_Quadrature)->Arg(16)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
