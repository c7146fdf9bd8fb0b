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

#include "iaoq/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace iaoq::kernels {

namespace {

// Below this size thread startup costs more than the loop.
constexpr std::int64_t kParallelThreshold = 1 << 12;

// Complex product without the C99 infinity recovery path, which blocks
// vectorization in the outlined parallel loops.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline std::uint64_t insert_zero(std::uint64_t i, int bit) {
  std::uint64_t low = i & ((1ull << bit) - 1);
  return ((i >> bit) << (bit + 1)) | low;
}

}  // namespace

void apply_1q(cplx *v, int n, int q, const Eigen::Matrix2cd &m) {
  const std::int64_t half = std::int64_t(1) << (n - 1);
  const std::int64_t stride = std::int64_t(1) << q;
  const cplx m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  // Pairs (i0, i0 + stride) come in contiguous runs of length stride.
#pragma omp parallel for schedule(static) if (half >= kParallelThreshold)
  for (std::int64_t i = 0; i < half; ++i) {
    const std::int64_t i0 = ((i >> q) << (q + 1)) | (i & (stride - 1));
    const cplx a = v[i0], b = v[i0 + stride];
    v[i0] = mul(m00, a) + mul(m01, b);
    v[i0 + stride] = mul(m10, a) + mul(m11, b);
  }
}

void apply_2q(cplx *v, int n, int qa, int qb, const Eigen::Matrix4cd &m) {
  const std::int64_t quarter = std::int64_t(1) << (n - 2);
  const int lo = std::min(qa, qb), hi = std::max(qa, qb);
  const std::uint64_t ba = 1ull << qa, bb = 1ull << qb;
#pragma omp parallel for schedule(static) if (quarter >= kParallelThreshold)
  for (std::int64_t i = 0; i < quarter; ++i) {
    std::uint64_t base = insert_zero(insert_zero(static_cast<std::uint64_t>(i), lo), hi);
    const std::uint64_t idx[4] = {base, base | ba, base | bb, base | ba | bb};
    cplx in[4] = {v[idx[0]], v[idx[1]], v[idx[2]], v[idx[3]]};
    for (int r = 0; r < 4; ++r)
      v[idx[r]] = mul(m(r, 0), in[0]) + mul(m(r, 1), in[1]) + mul(m(r, 2), in[2]) + mul(m(r, 3), in[3]);
  }
}

void apply_cnot(cplx *v, int n, int control, int target) {
  const std::int64_t quarter = std::int64_t(1) << (n - 2);
  const int lo = std::min(control, target), hi = std::max(control, target);
  const std::uint64_t bc = 1ull << control, bt = 1ull << target;
#pragma omp parallel for schedule(static) if (quarter >= kParallelThreshold)
  for (std::int64_t i = 0; i < quarter; ++i) {
    std::uint64_t base = insert_zero(insert_zero(static_cast<std::uint64_t>(i), lo), hi);
    std::swap(v[base | bc], v[base | bc | bt]);
  }
}

namespace serial {

void apply_1q(cplx *v, int n, int q, const Eigen::Matrix2cd &m) {
  const std::uint64_t dim = 1ull << n, bit = 1ull << q;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    cplx a = v[i], b = v[i | bit];
    v[i] = m(0, 0) * a + m(0, 1) * b;
    v[i | bit] = m(1, 0) * a + m(1, 1) * b;
  }
}

void apply_2q(cplx *v, int n, int qa, int qb, const Eigen::Matrix4cd &m) {
  const std::uint64_t dim = 1ull << n, ba = 1ull << qa, bb = 1ull << qb;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & (ba | bb)) continue;
    const std::uint64_t idx[4] = {i, i | ba, i | bb, i | ba | bb};
    cplx in[4] = {v[idx[0]], v[idx[1]], v[idx[2]], v[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += m(r, c) * in[c];
      v[idx[r]] = acc;
    }
  }
}

void apply_cnot(cplx *v, int n, int control, int target) {
  const std::uint64_t dim = 1ull << n, bc = 1ull << control, bt = 1ull << target;
  for (std::uint64_t i = 0; i < dim; ++i)
    if ((i & bc) && !(i & bt)) std::swap(v[i], v[i | bt]);
}

}  // namespace serial

}  // namespace iaoq::kernels
