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
#include <vector>

#include "iaoq/types.hpp"

namespace iaoq {

enum class GateKind { X, H, S, Sdg, Rx, Ry, Rz, U3, CNOT, SO4 };

/**
 * One gate. Angles follow R_a(t) = exp(-i t sigma_a / 2) and
 * U3(t, p, l) = Rz(p) Rx(-pi/2) Rz(t) Rx(pi/2) Rz(l). SO4 carries
 * (tA, pA, lA, tB, pB, lB): the U3 angles on q0 and q1.
 *
 * Angle slot k may be bound to circuit parameter param[k] as
 * angle = scale[k] * theta[param[k]].
 */
struct Gate {
  GateKind kind = GateKind::X;
  int q0 = 0;
  int q1 = -1;
  std::array<double, 6> angles{};
  std::array<int, 6> param{-1, -1, -1, -1, -1, -1};
  std::array<double, 6> scale{1, 1, 1, 1, 1, 1};

  int n_angles() const;
  bool two_qubit() const { return kind == GateKind::CNOT || kind == GateKind::SO4; }
};

class Circuit {
 public:
  explicit Circuit(int n_qubits = 0) : n_(n_qubits) {}

  int n_qubits() const { return n_; }
  const std::vector<Gate> &gates() const { return gates_; }
  std::vector<Gate> &gates() { return gates_; }

  Circuit &add(const Gate &g);
  Circuit &x(int q);
  Circuit &h(int q);
  Circuit &s(int q);
  Circuit &sdg(int q);
  Circuit &rx(int q, double t, int param = -1, double scale = 1.0);
  Circuit &ry(int q, double t, int param = -1, double scale = 1.0);
  Circuit &rz(int q, double t, int param = -1, double scale = 1.0);
  Circuit &u3(int q, double t, double p, double l);
  Circuit &cnot(int control, int target);
  Circuit &so4(int q0, int q1, const std::array<double, 6> &angles);
  Circuit &append(const Circuit &other);

  // Sets every bound angle from theta.
  void bind(const Eigen::VectorXd &theta);
  int n_params() const;
  int cnot_count() const;

 private:
  int n_;
  std::vector<Gate> gates_;
};

Eigen::Matrix2cd rotation_matrix(char axis, double t);
Eigen::Matrix2cd u3_matrix(double t, double p, double l);
// Single-qubit gate matrix; throws for two-qubit kinds.
Eigen::Matrix2cd gate_matrix(const Gate &g);
// 4x4 unitary on (q0, q1) with basis index b(q0) + 2 b(q1).
Eigen::Matrix4cd two_qubit_matrix(const Gate &g);

// SO4 composites rewritten as H, S, Sdg, U3 and CNOT gates.
Circuit expand_composites(const Circuit &c);

// Dense unitary of a circuit, qubit q = bit q of the basis index (n <= 10).
CMat circuit_unitary(const Circuit &c);

}  // namespace iaoq
