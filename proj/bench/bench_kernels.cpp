// Copyright 2026 The iaoq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OpenMP kernels against their serial references: statevector gate
// application and the two-electron integral transformation.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "iaoq/integrals.hpp"
#include "iaoq/kernels.hpp"
#include "iaoq/orbital_space.hpp"

namespace {

using iaoq::kernels::cplx;

std::vector<cplx> random_vector(int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<cplx> v(std::size_t{1} << n);
  for (auto &x : v) x = cplx(g(rng), g(rng));
  return v;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

Eigen::Matrix4cd random_4x4() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::Matrix4cd m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = cplx(g(rng), g(rng));
  return Eigen::HouseholderQR<Eigen::Matrix4cd>(m).householderQ();
}

template <bool Parallel>
void BM_OneQubit(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  auto v = random_vector(n);
  const Eigen::Matrix2cd h = hadamard();
  for (auto _ : state) {
    for (int q = 0; q < n; ++q) {
      if constexpr (Parallel)
        iaoq::kernels::apply_1q(v.data(), n, q, h);
      else
        iaoq::kernels::serial::apply_1q(v.data(), n, q, h);
    }
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * n * static_cast<long>(v.size()));
}

template <bool Parallel>
void BM_TwoQubit(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  auto v = random_vector(n);
  const Eigen::Matrix4cd u = random_4x4();
  for (auto _ : state) {
    for (int q = 0; q + 1 < n; ++q) {
      if constexpr (Parallel)
        iaoq::kernels::apply_2q(v.data(), n, q, q + 1, u);
      else
        iaoq::kernels::serial::apply_2q(v.data(), n, q, q + 1, u);
    }
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * (n - 1) * static_cast<long>(v.size()));
}

template <bool Parallel>
void BM_Cnot(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  auto v = random_vector(n);
  for (auto _ : state) {
    for (int q = 0; q + 1 < n; ++q) {
      if constexpr (Parallel)
        iaoq::kernels::apply_cnot(v.data(), n, q, q + 1);
      else
        iaoq::kernels::serial::apply_cnot(v.data(), n, q, q + 1);
    }
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * (n - 1) * static_cast<long>(v.size()));
}

iaoq::PackedEri random_eri(int n) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const int np = n * (n + 1) / 2;
  iaoq::Mat b(np, np);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) b(i, j) = g(rng);
  return iaoq::PackedEri::from_pair_matrix(b * b.transpose() / np);
}

template <bool Parallel>
void BM_TransformEri(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  const iaoq::PackedEri eri = random_eri(n);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  iaoq::Mat c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = g(rng);
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(iaoq::transform_eri(eri, c));
    else
      benchmark::DoNotOptimize(iaoq::transform_eri_reference(eri, c));
  }
}

}  // namespace

BENCHMARK(BM_OneQubit<true>)->Name("apply_1q/openmp")->DenseRange(10, 20, 5);
BENCHMARK(BM_OneQubit<false>)->Name("apply_1q/serial")->DenseRange(10, 20, 5);
BENCHMARK(BM_TwoQubit<true>)->Name("apply_2q/openmp")->DenseRange(10, 20, 5);
BENCHMARK(BM_TwoQubit<false>)->Name("apply_2q/serial")->DenseRange(10, 20, 5);
BENCHMARK(BM_Cnot<true>)->Name("apply_cnot/openmp")->DenseRange(10, 20, 5);
BENCHMARK(BM_Cnot<false>)->Name("apply_cnot/serial")->DenseRange(10, 20, 5);
BENCHMARK(BM_TransformEri<true>)->Name("transform_eri/openmp")->Arg(10)->Arg(20)->Arg(30)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransformEri<false>)->Name("transform_eri/serial")->Arg(10)->Arg(20)->Arg(30)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
