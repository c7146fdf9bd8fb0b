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

#include <array>
#include <vector>

#include "iaoq/bundle.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

struct IAOBasis {
  Mat coeff;  // n_b1 x n_b2
  bool orthonormalized = false;
  bool localized = false;
};

// Raw (non-orthonormal) intrinsic atomic orbitals.
IAOBasis build_iao(const Mat &s1, const Mat &s12, const Mat &s2,
                   const Mat &c_occ);
IAOBasis build_iao(const IntegralBundle &bundle);

// Symmetric orthonormalization coeff <- coeff G^{-1/2}, G = coeff^T s1 coeff.
IAOBasis lowdin_orthonormalize(const IAOBasis &basis, const Mat &s1);

// Sum_i |<i|r|i>|^2 over the columns of an orthonormal coefficient matrix.
double boys_functional(const Mat &coeff, const std::array<Mat, 3> &dipole);

struct BoysResult {
  IAOBasis basis;
  std::vector<double> history;  // functional after every accepted rotation
  int sweeps = 0;
  bool converged = false;
};

BoysResult boys_localize(const IAOBasis &basis, const std::array<Mat, 3> &dipole,
                         const Mat &s1, int max_sweeps = 100, double tol = 1e-8);

// s1-metric norm of (1 - P) c_occ with P the projector on the span of an
// orthonormal basis.
double span_residual(const Mat &orthonormal, const Mat &s1, const Mat &c_occ);

}  // namespace iaoq
