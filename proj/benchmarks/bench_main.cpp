// SPDX-License-Identifier: Apache-2.0

#include "wvqp/bohm.hpp"
#include "wvqp/hilbert.hpp"
#include "wvqp/quasiprob.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace wvqp;

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n;
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return (m + m.adjoint()) * 0.5;
}

StateVector random_state(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> n;
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(n(rng), n(rng));
  return StateVector::normalized(v);
}

void BM_JointQp(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(11);
  const auto b = spectral_decompose(Observable::from_matrix(random_hermitian(rng, d)));
  const auto a = spectral_decompose(Observable::from_matrix(random_hermitian(rng, d)));
  const auto psi = random_state(rng, d);
  const Alpha alpha(0.3, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(joint_qp(b, a, psi, alpha));
}
BENCHMARK(BM_JointQp)->Arg(4)->Arg(16)->Arg(64);

void BM_SpectralDecompose(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(12);
  const auto a = Observable::from_matrix(random_hermitian(rng, d));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_decompose(a));
}
BENCHMARK(BM_SpectralDecompose)->Arg(16)->Arg(64);

void BM_CrankNicolsonStep(benchmark::State& state) {
  const bohm::Grid1D g(static_cast<std::size_t>(state.range(0)), -20.0, 20.0);
  const bohm::BohmConfig cfg;
  const bohm::CrankNicolson cn(bohm::build_hamiltonian(g, cfg), cfg.hbar, 1e-3);
  Vector amps = bohm::WaveFunction::gaussian(g, 0.0, 1.0, 1.0).amplitudes();
  for (auto _ : state) {
    cn.step(amps);
    benchmark::DoNotOptimize(amps.data());
  }
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(512)->Arg(4096);

void BM_Trajectories(benchmark::State& state) {
  const bohm::Grid1D g(1024, -20.0, 20.0);
  bohm::BohmConfig cfg;
  cfg.dt = 1e-2;
  const auto h = bohm::build_hamiltonian(g, cfg);
  const auto psi = bohm::WaveFunction::gaussian(g, 0.0, 1.0, 0.5);
  const auto starts = bohm::sample_initial_positions(psi, static_cast<std::size_t>(state.range(0)), 5);
  bohm::TrajectoryOptions opts;
  opts.record_stride = 10;
  for (auto _ : state) benchmark::DoNotOptimize(bohm::integrate_trajectories(psi, h, cfg, starts, 1.0, opts));
}
BENCHMARK(BM_Trajectories)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
