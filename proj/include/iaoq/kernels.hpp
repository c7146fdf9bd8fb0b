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

#include <Eigen/Dense>
#include <complex>

namespace iaoq::kernels {

using cplx = std::complex<double>;

// In-place gate application on a 2^n amplitude array; qubit q is bit q of
// the index. The parallel variants use OpenMP worksharing over independent
// amplitude blocks, the serial ones are the reference used in tests.
void apply_1q(cplx *v, int n, int q, const Eigen::Matrix2cd &m);
void apply_2q(cplx *v, int n, int qa, int qb, const Eigen::Matrix4cd &m);
void apply_cnot(cplx *v, int n, int control, int target);

namespace serial {
void apply_1q(cplx *v, int n, int q, const Eigen::Matrix2cd &m);
void apply_2q(cplx *v, int n, int qa, int qb, const Eigen::Matrix4cd &m);
void apply_cnot(cplx *v, int n, int control, int target);
}  // namespace serial

}  // namespace iaoq::kernels
