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

#include "iaoq/circuit.hpp"

#include <cmath>
#include <numbers>

#include "iaoq/error.hpp"
#include "iaoq/kernels.hpp"

namespace iaoq {

namespace {

constexpr double kPi = std::numbers::pi;

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) fail(ErrorKind::InvalidInput, "gate qubit index out of range");
}

}  // namespace

int Gate::n_angles() const {
  switch (kind) {
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
      return 1;
    case GateKind::U3:
      return 3;
    case GateKind::SO4:
      return 6;
    default:
      return 0;
  }
}

Circuit &Circuit::add(const Gate &g) {
  check_qubit(g.q0, n_);
  if (g.two_qubit()) {
    check_qubit(g.q1, n_);
    if (g.q0 == g.q1) fail(ErrorKind::InvalidInput, "two-qubit gate on a single qubit");
  }
  for (int k = 0; k < g.n_angles(); ++k)
    if (!std::isfinite(g.angles[k])) fail(ErrorKind::InvalidInput, "gate angle not finite");
  gates_.push_back(g);
  return *this;
}

Circuit &Circuit::x(int q) { return add(Gate{GateKind::X, q}); }
Circuit &Circuit::h(int q) { return add(Gate{GateKind::H, q}); }
Circuit &Circuit::s(int q) { return add(Gate{GateKind::S, q}); }
Circuit &Circuit::sdg(int q) { return add(Gate{GateKind::Sdg, q}); }

Circuit &Circuit::rx(int q, double t, int param, double scale) {
  Gate g{GateKind::Rx, q};
  g.angles[0] = t;
  g.param[0] = param;
  g.scale[0] = scale;
  return add(g);
}

Circuit &Circuit::ry(int q, double t, int param, double scale) {
  Gate g{GateKind::Ry, q};
  g.angles[0] = t;
  g.param[0] = param;
  g.scale[0] = scale;
  return add(g);
}

Circuit &Circuit::rz(int q, double t, int param, double scale) {
  Gate g{GateKind::Rz, q};
  g.angles[0] = t;
  g.param[0] = param;
  g.scale[0] = scale;
  return add(g);
}

Circuit &Circuit::u3(int q, double t, double p, double l) {
  Gate g{GateKind::U3, q};
  g.angles[0] = t;
  g.angles[1] = p;
  g.angles[2] = l;
  return add(g);
}

Circuit &Circuit::cnot(int control, int target) {
  Gate g{GateKind::CNOT, control, target};
  return add(g);
}

Circuit &Circuit::so4(int q0, int q1, const std::array<double, 6> &angles) {
  Gate g{GateKind::SO4, q0, q1};
  g.angles = angles;
  return add(g);
}

Circuit &Circuit::append(const Circuit &other) {
  if (other.n_ != n_) fail(ErrorKind::InvalidInput, "circuit widths differ");
  for (const auto &g : other.gates_) gates_.push_back(g);
  return *this;
}

void Circuit::bind(const Eigen::VectorXd &theta) {
  for (auto &g : gates_)
    for (int k = 0; k < g.n_angles(); ++k) {
      if (g.param[k] < 0) continue;
      if (g.param[k] >= theta.size())
        fail(ErrorKind::InvalidInput, "parameter index beyond parameter vector");
      g.angles[k] = g.scale[k] * theta(g.param[k]);
    }
}

int Circuit::n_params() const {
  int m = 0;
  for (const auto &g : gates_)
    for (int k = 0; k < g.n_angles(); ++k) m = std::max(m, g.param[k] + 1);
  return m;
}

int Circuit::cnot_count() const {
  int c = 0;
  for (const auto &g : gates_) {
    if (g.kind == GateKind::CNOT) c += 1;
    if (g.kind == GateKind::SO4) c += 2;
  }
  return c;
}

Eigen::Matrix2cd rotation_matrix(char axis, double t) {
  const double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
  Eigen::Matrix2cd m;
  switch (axis) {
    case 'X':
      m << c, cplx(0, -s), cplx(0, -s), c;
      break;
    case 'Y':
      m << c, -s, s, c;
      break;
    case 'Z':
      m << std::polar(1.0, -0.5 * t), 0, 0, std::polar(1.0, 0.5 * t);
      break;
    default:
      fail(ErrorKind::InvalidInput, "rotation axis must be X, Y or Z");
  }
  return m;
}

Eigen::Matrix2cd u3_matrix(double t, double p, double l) {
  return rotation_matrix('Z', p) * rotation_matrix('X', -kPi / 2) *
         rotation_matrix('Z', t) * rotation_matrix('X', kPi / 2) *
         rotation_matrix('Z', l);
}

Eigen::Matrix2cd gate_matrix(const Gate &g) {
  Eigen::Matrix2cd m;
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::X:
      m << 0, 1, 1, 0;
      return m;
    case GateKind::H:
      m << r, r, r, -r;
      return m;
    case GateKind::S:
      m << 1, 0, 0, I_;
      return m;
    case GateKind::Sdg:
      m << 1, 0, 0, -I_;
      return m;
    case GateKind::Rx:
      return rotation_matrix('X', g.angles[0]);
    case GateKind::Ry:
      return rotation_matrix('Y', g.angles[0]);
    case GateKind::Rz:
      return rotation_matrix('Z', g.angles[0]);
    case GateKind::U3:
      return u3_matrix(g.angles[0], g.angles[1], g.angles[2]);
    default:
      fail(ErrorKind::InvalidInput, "not a single-qubit gate");
  }
}

Circuit expand_composites(const Circuit &c) {
  Circuit out(c.n_qubits());
  for (const auto &g : c.gates()) {
    if (g.kind != GateKind::SO4) {
      out.add(g);
      continue;
    }
    const int a = g.q0, b = g.q1;
    out.s(a).s(b).h(a).cnot(a, b);
    out.u3(a, g.angles[0], g.angles[1], g.angles[2]);
    out.u3(b, g.angles[3], g.angles[4], g.angles[5]);
    out.cnot(a, b).h(a).sdg(a).sdg(b);
  }
  return out;
}

Eigen::Matrix4cd two_qubit_matrix(const Gate &g) {
  if (!g.two_qubit()) fail(ErrorKind::InvalidInput, "not a two-qubit gate");
  if (g.kind == GateKind::CNOT) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    // control = q0 (bit 0 of the local index), target = q1 (bit 1)
    for (int i = 0; i < 4; ++i) m((i & 1) ? (i ^ 2) : i, i) = 1.0;
    return m;
  }
  Circuit local(2);
  Gate copy = g;
  copy.q0 = 0;
  copy.q1 = 1;
  local.add(copy);
  return circuit_unitary(expand_composites(local));
}

CMat circuit_unitary(const Circuit &c) {
  const int n = c.n_qubits();
  if (n > 10) fail(ErrorKind::InvalidInput, "dense unitary limited to 10 qubits");
  const Eigen::Index dim = Eigen::Index(1) << n;
  CMat u = CMat::Identity(dim, dim);
  Circuit flat = expand_composites(c);
  for (Eigen::Index col = 0; col < dim; ++col) {
    cplx *v = u.col(col).data();
    for (const auto &g : flat.gates()) {
      if (g.kind == GateKind::CNOT)
        kernels::serial::apply_cnot(v, n, g.q0, g.q1);
      else
        kernels::serial::apply_1q(v, n, g.q0, gate_matrix(g));
    }
  }
  return u;
}

}  // namespace iaoq
