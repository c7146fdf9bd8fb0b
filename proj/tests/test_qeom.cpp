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

#include "iaoq/bundle.hpp"
#include "iaoq/error.hpp"
#include "iaoq/fci.hpp"
#include "iaoq/orbital_space.hpp"
#include "iaoq/qeom.hpp"
#include "support.hpp"

using namespace iaoq;
using namespace iaoq::testing;
using Catch::Matchers::WithinAbs;

namespace {

PauliSum read_pauli(const std::string &rel) {
  std::ifstream in(fixture(rel));
  std::stringstream ss;
  ss << in.rdbuf();
  return PauliSum::from_text(ss.str());
}

double max_abs(const CMat &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

CMat comm(const CMat &a, const CMat &b) { return a * b - b * a; }

CMat triple(const CMat &a, const CMat &b, const CMat &c) {
  return 0.5 * (comm(comm(a, b), c) + comm(a, comm(b, c)));
}

// Spin-resolved single and double excitations 0 -> 1 for two orbitals from
// dense fermion operators, in the order up single, down single, double.
std::vector<CMat> dense_basis() {
  auto c = [](int j) { return dense_creation(j, 4); };
  auto a = [](int j) { return CMat(dense_creation(j, 4).adjoint()); };
  return {c(1) * a(0), c(3) * a(2), c(1) * c(3) * a(2) * a(0)};
}

}  // namespace

TEST_CASE("excitation bases", "[qeom]") {
  const ExcitationBasis r = ExcitationBasis::spin_resolved({0}, {1}, 2);
  REQUIRE(r.size() == 3);
  const auto dense = dense_basis();
  for (std::size_t i = 0; i < 3; ++i) CHECK(max_abs(r.ops[i].to_dense() - dense[i]) < 1e-14);
  CHECK(r.labels[0] == "Su0->1");
  const ExcitationBasis s = ExcitationBasis::spin_summed({0}, {1}, 2);
  CHECK(s.size() == 2);
  CHECK(max_abs(s.ops[0].to_dense() - dense[0] - dense[1]) < 1e-14);
  CHECK(ExcitationBasis::spin_summed({0, 1}, {2, 3}, 4).size() == 4 + 9);
  CHECK(r.encode_two_orbital().ops[0].n_qubits() == 2);
  CHECK_THROWS_AS(ExcitationBasis::spin_resolved({0}, {0}, 2), Error);
}

TEST_CASE("matrices match a dense evaluation", "[qeom]") {
  std::mt19937_64 rng(71);
  const MOIntegrals mo = random_integrals(2, 2, rng);
  const CMat hd = dense_hamiltonian(mo);
  const PauliSum h = map_hamiltonian(mo);
  const ExcitationBasis b = ExcitationBasis::spin_resolved({0}, {1}, 2);
  const auto e = dense_basis();
  for (const CVec &psi : {CVec(QuantumState::basis(4, 0b0101).vector()), random_state(16, rng)}) {
    const QeomMatrices qm = build_matrices(QuantumState::from_vector(psi), b, h);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const CMat ed = e[static_cast<std::size_t>(i)].adjoint();
        const CMat &en = e[static_cast<std::size_t>(j)];
        const CMat end = en.adjoint();
        auto ex = [&](const CMat &o) { return psi.dot(o * psi); };
        CHECK(std::abs(qm.v(i, j) - ex(comm(ed, en))) < 1e-12);
        CHECK(std::abs(qm.m(i, j) - ex(triple(ed, hd, en))) < 1e-12);
        CHECK(std::abs(qm.w(i, j) + ex(comm(ed, end))) < 1e-12);
        CHECK(std::abs(qm.q(i, j) + ex(triple(ed, hd, end))) < 1e-12);
      }
  }
}

TEST_CASE("HF reference with a one-body Hamiltonian", "[qeom]") {
  MOIntegrals mo;
  mo.n_orb = 3;
  mo.n_elec = 2;
  mo.h = Mat::Zero(3, 3);
  mo.h.diagonal() << -1.2, 0.3, 0.8;
  mo.eri = PackedEri(3);
  const PauliSum h = map_hamiltonian(mo);
  ExcitationBasis singles;
  const ExcitationBasis full = ExcitationBasis::spin_resolved({0}, {1, 2}, 3);
  for (std::size_t i = 0; i < full.size(); ++i)
    if (full.labels[i][0] == 'S') singles.ops.push_back(full.ops[i]);
  REQUIRE(singles.size() == 4);
  const QeomMatrices qm = build_matrices(QuantumState::basis(6, 0b001001), singles, h);
  Vec expect(4);
  expect << 1.5, 2.0, 1.5, 2.0;
  CHECK(max_abs(qm.m - CMat(expect.cast<cplx>().asDiagonal())) < 1e-12);
  CHECK(max_abs(qm.v - CMat::Identity(4, 4)) < 1e-12);
  CHECK(max_abs(qm.w) < 1e-12);
  CHECK(max_abs(qm.q) < 1e-12);
  const QeomSolution sol = solve(qm);
  REQUIRE(sol.energies.size() == 4);
  CHECK_THAT(sol.energies[0], WithinAbs(1.5, 1e-12));
  CHECK_THAT(sol.energies[3], WithinAbs(2.0, 1e-12));
}

TEST_CASE("metric is Hermitian and W vanishes on HF", "[qeom]") {
  const PauliSum h = read_pauli("nh3/hono_luno/r1.00.txt");
  const ExcitationBasis b = ExcitationBasis::spin_resolved({0}, {1}, 2).encode_two_orbital();
  const FCIResult f = fci(h);
  const QeomMatrices g = build_matrices(QuantumState::from_vector(f.state(0)), b, h);
  CHECK(max_abs(g.v - g.v.adjoint()) < 1e-10);
  const QeomMatrices hf = build_matrices(QuantumState::basis(2, 0), b, h);
  CHECK(max_abs(hf.w) < 1e-12);
}

TEST_CASE("exact ground states give exact gaps", "[qeom]") {
  for (const char *r : {"0.70", "1.00", "2.00"}) {
    const PauliSum h = read_pauli(std::string("nh3/hono_luno/r") + r + ".txt");
    const FCIResult f = fci(h);
    const ExcitationBasis b = ExcitationBasis::spin_resolved({0}, {1}, 2).encode_two_orbital();
    const QeomSolution sol = solve(build_matrices(QuantumState::from_vector(f.state(0)), b, h));
    REQUIRE(sol.energies.size() == 3);
    for (int k = 0; k < 3; ++k)
      CHECK_THAT(sol.energies[static_cast<std::size_t>(k)], WithinAbs(f.energies(k + 1) - f.energies(0), 1e-8));
    CHECK(sol.max_imag < 1e-8);
  }
  // Four-qubit H2: the spin-resolved basis reaches the Sz = 0 excited states.
  const IntegralBundle bd = load_bundle(fixture("h2_sto6g/r1.20"));
  const MOIntegrals mo = ao2mo(bd, bd.mo_coeff);
  const FCIResult f = fci(mo, 2);
  const QeomSolution sol = solve(build_matrices(QuantumState::from_vector(f.state(0)),
                                                ExcitationBasis::spin_resolved({0}, {1}, 2), map_hamiltonian(mo)));
  REQUIRE(sol.energies.size() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK_THAT(sol.energies[static_cast<std::size_t>(k)], WithinAbs(f.energies(k + 1) - f.energies(0), 1e-8));
}

TEST_CASE("degenerate ground state makes the metric singular", "[qeom]") {
  CMat hd = CMat::Zero(4, 4);
  hd(0, 0) = hd(3, 3) = -1.0;
  const PauliSum h = PauliSum::from_dense(hd);
  CVec psi = CVec::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  const ExcitationBasis b = ExcitationBasis::spin_resolved({0}, {1}, 2).encode_two_orbital();
  const QeomMatrices qm = build_matrices(QuantumState::from_vector(psi), b, h);
  CHECK(std::abs(metric_determinant(qm)) < 1e-12);
  CHECK_THROWS_AS(solve(qm), Error);
  try {
    solve(qm);
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("det(G)") != std::string::npos);
  }
}

TEST_CASE("metric determinant identities", "[qeom]") {
  QeomMatrices id;
  id.v = CMat::Identity(2, 2);
  id.w = id.m = id.q = CMat::Zero(2, 2);
  CHECK_THAT(metric_determinant(id), WithinAbs(1.0, 1e-15));
  const PauliSum h = read_pauli("nh3/hono_luno/r1.50.txt");
  const QuantumState g = QuantumState::from_vector(fci(h).state(0));
  ExcitationBasis b = ExcitationBasis::spin_resolved({0}, {1}, 2).encode_two_orbital();
  const double d1 = metric_determinant(build_matrices(g, b, h));
  const double c = 1.5;
  for (auto &o : b.ops) o *= c;
  const double d2 = metric_determinant(build_matrices(g, b, h));
  // Each of the 2k rows of the block metric carries c^2.
  CHECK_THAT(d2 / d1, WithinAbs(std::pow(c, 4 * 3), 1e-8 * std::pow(c, 12)));
}

TEST_CASE("metric determinant decays along the dissociation curve", "[qeom]") {
  const auto grid = load_grid(fixture("nh3/hono_luno"));
  std::vector<double> dets;
  for (const auto &e : grid) {
    std::ifstream in(e.path);
    std::stringstream ss;
    ss << in.rdbuf();
    const PauliSum h = PauliSum::from_text(ss.str());
    const QuantumState g = QuantumState::from_vector(fci(h).state(0));
    dets.push_back(std::abs(metric_determinant(
        build_matrices(g, ExcitationBasis::spin_resolved({0}, {1}, 2).encode_two_orbital(), h))));
  }
  // Beyond 2.5 A the determinant heads toward zero.
  CHECK(dets.back() < dets[grid.size() - 2]);
  CHECK(dets.back() < 1e-2 * dets.front());
}
