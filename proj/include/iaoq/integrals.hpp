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

#pragma once

#include <cstddef>
#include <vector>

#include "iaoq/types.hpp"

namespace iaoq {

/**
 * Two-electron integrals (pr|qs) in chemists' notation with 8-fold
 * permutational symmetry, stored once per canonical index.
 *
 * Layout: pr = pair(p, r), qs = pair(q, s), value at pair(pr, qs), where
 * pair(i, j) = i(i+1)/2 + j for i >= j.
 */
class PackedEri {
 public:
  PackedEri() = default;
  explicit PackedEri(std::size_t n);

  static std::size_t pair(std::size_t i, std::size_t j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }
  static std::size_t packed_size(std::size_t n) {
    std::size_t np = n * (n + 1) / 2;
    return np * (np + 1) / 2;
  }

  std::size_t n() const { return n_; }
  std::size_t n_pairs() const { return n_ * (n_ + 1) / 2; }

  double operator()(std::size_t p, std::size_t r, std::size_t q,
                    std::size_t s) const {
    return data_[pair(pair(p, r), pair(q, s))];
  }
  double &at(std::size_t p, std::size_t r, std::size_t q, std::size_t s) {
    return data_[pair(pair(p, r), pair(q, s))];
  }

  // Element of the symmetric n_pairs x n_pairs matrix (pr|qs).
  double pair_element(std::size_t pr, std::size_t qs) const {
    return data_[pair(pr, qs)];
  }

  const std::vector<double> &data() const { return data_; }
  std::vector<double> &data() { return data_; }

  // Full n^4 array, index ((p*n + r)*n + q)*n + s.
  std::vector<double> to_dense() const;
  // Packs a dense n^4 array; throws if any symmetry-related pair differs by
  // more than tol.
  static PackedEri from_dense(const std::vector<double> &dense, std::size_t n,
                              double tol);
  // Symmetric n_pairs x n_pairs matrix.
  Mat pair_matrix() const;
  static PackedEri from_pair_matrix(const Mat &m);

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Folded electronic Hamiltonian over an orthonormal orbital set.
struct MOIntegrals {
  double e0 = 0.0;
  Mat h;
  PackedEri eri;
  int n_orb = 0;
  int n_elec = 0;
  bool restricted = true;

  // Throws on asymmetric h or mismatched dimensions.
  void validate() const;
};

}  // namespace iaoq
