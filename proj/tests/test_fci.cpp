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

#include "iaoq/bundle.hpp"
#include "iaoq/error.hpp"
#include "iaoq/fci.hpp"
#include "iaoq/orbital_space.hpp"
#include "iaoq/pauli.hpp"
#include "support.hpp"

using namespace iaoq;
using namespace iaoq::testing;
using Catch::Matchers::WithinAbs;

TEST_CASE("one electron FCI is the lowest orbital eigenvalue", "[fci]") {
  std::mt19937_64 rng(21);
  const MOIntegrals mo = random_integrals(4, 2, rng);
  const double eps = Eigen::SelfAdjointEigenSolver<Mat>(mo.h).eigenvalues()(0);
  CHECK_THAT(fci(mo, 1, 1).ground_energy(), WithinAbs(mo.e0 + eps, 1e-12));
}

TEST_CASE("sector basis enumeration", "[fci]") {
  const Sector s = Sector::from_counts(3, 2, 0);
  CHECK(s.n_up == 1);
  CHECK(s.n_down == 1);
  const auto b = s.basis();
  CHECK(b.size() == 9);
  CHECK(std::is_sorted(b.begin(), b.end()));
  for (auto d : b) {
    CHECK(__builtin_popcountll(d & 0b111) == 1);
    CHECK(__builtin_popcountll(d >> 3) == 1);
  }
  CHECK_THROWS_AS(Sector::from_counts(3, 3, 0), Error);
  CHECK_THROWS_AS(Sector::from_counts(2, 6, 0), Error);
}

TEST_CASE("determinant FCI agrees with the dense Fock-space matrix", "[fci]") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 2 + trial % 2;
    const MOIntegrals mo = random_integrals(n, 2, rng);
    const FCIResult r = fci(mo, 2);
    const CMat full = dense_hamiltonian(mo);
    const CVec psi = r.state(0);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    CHECK((full * psi - r.ground_energy() * psi).norm() < 1e-9);
    // Sector restriction of the dense oracle.
    const auto &b = r.basis;
    CMat sub(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            full(static_cast<Eigen::Index>(b[i]), static_cast<Eigen::Index>(b[j]));
    const Vec ev = Eigen::SelfAdjointEigenSolver<CMat>(sub).eigenvalues();
    CHECK((ev - r.energies).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Pauli route and determinant route agree", "[fci]") {
  std::mt19937_64 rng(23);
  const MOIntegrals mo = random_integrals(3, 4, rng);
  const PauliSum h = map_hamiltonian(mo);
  FciOptions opt;
  opt.sector = Sector::from_counts(3, 4, 0);
  const FCIResult a = fci(mo, 4), b = fci(h, opt);
  CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() < 1e-10);
  // Without a sector the unrestricted spectrum contains the sector ground.
  const FCIResult all = fci(h);
  CHECK(all.energies.size() == 64);
  CHECK(all.ground_energy() <= a.ground_energy() + 1e-10);
}

TEST_CASE("spin labels separate singlets from triplets", "[fci]") {
  const IntegralBundle bd = load_bundle(fixture("h2_sto6g/r1.00"));
  const MOIntegrals mo = ao2mo(bd, bd.mo_coeff);
  const FCIResult r = fci(mo, 2);
  REQUIRE(r.s2.size() == 4);
  CHECK(r.s2[0] == Catch::Approx(0.0).margin(1e-10));
  int triplets = 0;
  for (double s : r.s2) {
    const bool singlet = std::abs(s) < 1e-8, triplet = std::abs(s - 2.0) < 1e-8;
    CHECK((singlet || triplet));
    triplets += triplet;
  }
  CHECK(triplets == 1);
  const FCIResult t = fci(mo, 2, 2);
  REQUIRE(t.energies.size() == 1);
  CHECK_THAT(t.s2[0], WithinAbs(2.0, 1e-12));
  const auto it = std::find_if(r.s2.begin(), r.s2.end(), [](double s) { return s > 1.0; });
  CHECK_THAT(r.energies(it - r.s2.begin()), WithinAbs(t.ground_energy(), 1e-10));
}

TEST_CASE("excite signs follow Jordan-Wigner ordering", "[fci]") {
  std::uint64_t out = 0;
  CHECK(excite(0b0001, 1, 0, out) == 1);
  CHECK(out == 0b0010);
  CHECK(excite(0b0101, 1, 0, out) == 1);
  CHECK(excite(0b0011, 2, 0, out) == -1);
  CHECK(out == 0b0110);
  CHECK(excite(0b0011, 1, 0, out) == 0);
  CHECK(excite(0b0010, 1, 0, out) == 0);
  for (std::uint64_t d = 0; d < 16; ++d)
    for (int p = 0; p < 4; ++p)
      for (int r = 0; r < 4; ++r) {
        const CMat op = dense_creation(p, 4) * dense_creation(r, 4).adjoint();
        const int s = excite(d, p, r, out);
        const CVec col = op.col(static_cast<Eigen::Index>(d));
        if (s == 0) {
          CHECK(col.norm() == 0.0);
        } else {
          CHECK(col(static_cast<Eigen::Index>(out)) == cplx(s));
        }
      }
}

TEST_CASE("oversized determinant spaces are rejected", "[fci]") {
  std::mt19937_64 rng(24);
  const MOIntegrals mo = random_integrals(14, 14, rng, 0.01);
  CHECK_THROWS_AS(fci(mo, 14), Error);
}
