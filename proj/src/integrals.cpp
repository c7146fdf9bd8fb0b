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

#include "iaoq/integrals.hpp"

#include <cmath>
#include <sstream>

#include "iaoq/error.hpp"

namespace iaoq {

PackedEri::PackedEri(std::size_t n) : n_(n), data_(packed_size(n), 0.0) {}

std::vector<double> PackedEri::to_dense() const {
  std::vector<double> out(n_ * n_ * n_ * n_);
  for (std::size_t p = 0; p < n_; ++p)
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t q = 0; q < n_; ++q)
        for (std::size_t s = 0; s < n_; ++s)
          out[((p * n_ + r) * n_ + q) * n_ + s] = (*this)(p, r, q, s);
  return out;
}

PackedEri PackedEri::from_dense(const std::vector<double> &dense,
                                std::size_t n, double tol) {
  if (dense.size() != n * n * n * n)
    fail(ErrorKind::InvalidInput, "eri: dense array has wrong size");
  PackedEri out(n);
  auto idx = [n](std::size_t p, std::size_t r, std::size_t q, std::size_t s) {
    return ((p * n + r) * n + q) * n + s;
  };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t s = 0; s < n; ++s) {
          double v = dense[idx(p, r, q, s)];
          double partners[3] = {dense[idx(r, p, q, s)], dense[idx(p, r, s, q)],
                                dense[idx(q, s, p, r)]};
          for (double w : partners) {
            if (std::abs(v - w) > tol) {
              std::ostringstream msg;
              msg << "eri: 8-fold symmetry broken at (" << p << r << "|" << q
                  << s << ")";
              fail(ErrorKind::InvalidInput, msg.str());
            }
          }
          if (p >= r && q >= s && pair(p, r) >= pair(q, s)) out.at(p, r, q, s) = v;
        }
  return out;
}

Mat PackedEri::pair_matrix() const {
  const std::size_t np = n_pairs();
  Mat m(np, np);
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b <= a; ++b) m(a, b) = m(b, a) = data_[pair(a, b)];
  return m;
}

PackedEri PackedEri::from_pair_matrix(const Mat &m) {
  const std::size_t np = static_cast<std::size_t>(m.rows());
  std::size_t n = 0;
  while (n * (n + 1) / 2 < np) ++n;
  if (n * (n + 1) / 2 != np || m.cols() != m.rows())
    fail(ErrorKind::InvalidInput, "eri: pair matrix has invalid shape");
  PackedEri out(n);
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      out.data_[pair(a, b)] = 0.5 * (m(a, b) + m(b, a));
  return out;
}

void MOIntegrals::validate() const {
  if (n_orb < 0 || h.rows() != n_orb || h.cols() != n_orb)
    fail(ErrorKind::InvalidInput, "h: dimension does not match n_orb");
  if (eri.n() != static_cast<std::size_t>(n_orb))
    fail(ErrorKind::InvalidInput, "eri: dimension does not match n_orb");
  if (n_orb > 0 && (h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    fail(ErrorKind::InvalidInput, "h: not symmetric");
  if (n_elec < 0 || n_elec > 2 * n_orb)
    fail(ErrorKind::InvalidInput, "n_elec: out of range");
  if (restricted && n_elec % 2 != 0)
    fail(ErrorKind::InvalidInput, "n_elec: odd electron count for restricted reference");
}

}  // namespace iaoq
