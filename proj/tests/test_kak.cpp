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

#include <fstream>
#include <sstream>

#include "iaoq/circuit.hpp"
#include "iaoq/kak.hpp"
#include "iaoq/qite.hpp"
#include "iaoq/simulator.hpp"
#include "support.hpp"

using namespace iaoq;
using namespace iaoq::testing;

namespace {

// |tr(a^dagger b)| / 4, one iff equal up to a global phase.
double overlap(const Eigen::Matrix4cd &a, const Eigen::Matrix4cd &b) {
  return std::abs((a.adjoint() * b).trace()) / 4.0;
}

Eigen::Matrix4cd synthesized(const KakResult &k) { return circuit_unitary(k.circuit); }

Eigen::Matrix4d random_so4(std::mt19937_64 &rng) {
  Eigen::Matrix4d o = random_orthogonal(4, rng);
  if (o.determinant() < 0) o.col(0) *= -1.0;
  return o;
}

PauliSum read_pauli(const std::string &rel) {
  std::ifstream in(fixture(rel));
  std::stringstream ss;
  ss << in.rdbuf();
  return PauliSum::from_text(ss.str());
}

}  // namespace

TEST_CASE("ZYZ angles reproduce single-qubit unitaries", "[kak]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Matrix2cd u = random_unitary(2, rng);
    const auto [theta, phi, lam] = zyz_angles(u);
    const Eigen::Matrix2cd r = rotation_matrix('Z', phi) * rotation_matrix('Y', theta) * rotation_matrix('Z', lam);
    CHECK(std::abs(std::abs((u.adjoint() * r).trace()) / 2.0 - 1.0) < 1e-12);
    CHECK(std::abs(std::abs((u.adjoint() * u3_matrix(theta, phi, lam)).trace()) / 2.0 - 1.0) < 1e-12);
  }
}

TEST_CASE("local factorization", "[kak]") {
  std::mt19937_64 rng(42);
  const Eigen::Matrix2cd a = random_unitary(2, rng), b = random_unitary(2, rng);
  Eigen::Matrix4cd u;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) u(i, j) = b(i >> 1, j >> 1) * a(i & 1, j & 1);
  Eigen::Matrix2cd fa, fb;
  CHECK(factor_local(u, fa, fb) < 1e-12);
  Eigen::Matrix4cd back;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) back(i, j) = fb(i >> 1, j >> 1) * fa(i & 1, j & 1);
  CHECK(overlap(u, back) == Catch::Approx(1.0).margin(1e-12));
  Gate cx;
  cx.kind = GateKind::CNOT;
  cx.q0 = 0;
  cx.q1 = 1;
  CHECK(factor_local(two_qubit_matrix(cx), fa, fb) > 0.1);
}

TEST_CASE("identity compacts to a 2-CNOT circuit", "[kak]") {
  const KakResult k = kak_compact(Eigen::Matrix4cd::Identity());
  CHECK_FALSE(k.general);
  CHECK(k.circuit.cnot_count() <= 2);
  CHECK(overlap(synthesized(k), Eigen::Matrix4cd::Identity()) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("real orthogonal unitaries need two CNOTs", "[kak]") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const cplx phase = std::polar(1.0, 0.1 * trial);
    const Eigen::Matrix4cd u = phase * random_so4(rng).cast<cplx>();
    const KakResult k = kak_compact(u);
    CHECK_FALSE(k.general);
    CHECK(expand_composites(k.circuit).cnot_count() == 2);
    CHECK(overlap(synthesized(k), u) > 1.0 - 1e-10);
    CHECK(phase_fidelity(synthesized(k), u) > 1.0 - 1e-10);
  }
  // CNOT-conjugated real rotation.
  Circuit c(2);
  c.cnot(0, 1).ry(1, 0.83).cnot(0, 1);
  const Eigen::Matrix4cd u = circuit_unitary(c);
  const KakResult k = kak_compact(u);
  CHECK_FALSE(k.general);
  CHECK(overlap(synthesized(k), u) > 1.0 - 1e-10);
}

TEST_CASE("generic unitaries fall back to three CNOTs", "[kak]") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Matrix4cd u = random_unitary(4, rng);
    const KakResult k = kak_compact(u);
    CHECK(k.general);
    CHECK(expand_composites(k.circuit).cnot_count() == 3);
    CHECK(overlap(synthesized(k), u) > 1.0 - 1e-9);
  }
}

TEST_CASE("compacted QITE circuit reproduces the accumulated evolution", "[kak]") {
  const PauliSum h = read_pauli("nh3/hono_luno/r1.00.txt");
  QiteConfig cfg;
  const QiteTrace t = qite_run(h, QuantumState::basis(2, 0), cfg);
  REQUIRE(t.steps.size() == 15);
  for (const auto &s : t.steps) {
    CHECK(s.cnots == 2);
    CHECK_FALSE(s.general);
  }
  CHECK(expand_composites(t.circuit).cnot_count() == 2);
  const CVec direct = t.unitary * QuantumState::basis(2, 0).vector();
  const CVec compact = run(t.circuit, QuantumState::basis(2, 0)).vector();
  CHECK(std::norm(direct.dot(compact)) > 1.0 - 1e-9);
}
