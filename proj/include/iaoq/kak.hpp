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
#include <array>

#include "iaoq/circuit.hpp"

namespace iaoq {

struct KakResult {
  Circuit circuit{2};
  bool general = false;  // true when the 3-CNOT fallback was needed
};

// (theta, phi, lambda) with u = phase * Rz(phi) Ry(theta) Rz(lambda), the
// U3 angle order.
std::array<double, 3> zyz_angles(const Eigen::Matrix2cd &u);

// Splits a 4x4 unitary into B (q1) and A (q0) with u = phase * kron(B, A).
// Returns the residual of the best rank-one fit.
double factor_local(const Eigen::Matrix4cd &u, Eigen::Matrix2cd &a,
                    Eigen::Matrix2cd &b);

// Synthesizes u on qubits (0, 1). Real orthogonal u (up to phase) gives one
// SO4 gate with 2 CNOTs; anything else gives a 3-CNOT circuit.
KakResult kak_compact(const Eigen::Matrix4cd &u, double tol = 1e-9);

// max over global phase of |tr(a^dagger b)| / 4, one for equal gates.
double phase_fidelity(const Eigen::Matrix4cd &a, const Eigen::Matrix4cd &b);

}  // namespace iaoq
