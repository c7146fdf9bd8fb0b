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
#include "iaoq/qite.hpp"
#include "support.hpp"

using namespace iaoq;
using namespace iaoq::testing;
using Catch::Matchers::WithinAbs;

namespace {

PauliSum read_pauli(const std::filesystem::path &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return PauliSum::from_text(ss.str());
}

QuantumState plus_state() {
  CVec v = CVec::Constant(2, 1.0 / std::sqrt(2.0));
  return QuantumState::from_vector(v);
}

}  // namespace

TEST_CASE("config validation", "[qite]") {
  QiteConfig c;
  CHECK(c.n_steps() == 14);
  c.dtau = 0.0;
  CHECK_THROWS_AS(c.validate(2), Error);
  c.dtau = 0.5;
  c.beta_total = 0.25;
  CHECK_THROWS_AS(c.validate(2), Error);
  CHECK(all_pauli_strings(2).size() == 15);
  CHECK(all_pauli_strings(2, true).size() == 16);
}

TEST_CASE("vanishing time step leaves the state unchanged", "[qite]") {
  std::mt19937_64 rng(61);
  const PauliSum h = read_pauli(fixture("nh3/hono_luno/r1.50.txt"));
  const QuantumState psi = QuantumState::from_vector(random_state(4, rng));
  const auto [res, next] = qite_step(psi, h, 1e-10, all_pauli_strings(2));
  CHECK(res.x.norm() < 1e-8);
  CHECK((next.vector() - psi.vector()).norm() < 1e-8);
}

TEST_CASE("exact ground state is a fixed point", "[qite]") {
  const PauliSum h = read_pauli(fixture("nh3/hono_luno/r1.50.txt"));
  const FCIResult r = fci(h);
  const QuantumState g = QuantumState::from_vector(r.state(0));
  const auto [res, next] = qite_step(g, h, 0.5, all_pauli_strings(2));
  CHECK(std::abs(expectation(next, h) - r.ground_energy()) < 1e-9);
}

TEST_CASE("single-qubit Z from |+> follows the tanh law", "[qite]") {
  QiteConfig cfg;
  cfg.dtau = 0.1;
  cfg.beta_total = 2.0;
  const QiteTrace t = qite_run(PauliSum::term(1, "Z"), plus_state(), cfg);
  REQUIRE(t.steps.size() == 21);
  for (const auto &s : t.steps) CHECK_THAT(s.energy, WithinAbs(-std::tanh(2.0 * s.beta), 1e-4));
}

TEST_CASE("step operators are unitary", "[qite]") {
  std::mt19937_64 rng(62);
  const PauliSum h = read_pauli(fixture("nh3/hono_luno/r2.00.txt"));
  QuantumState psi = QuantumState::basis(2, 0);
  for (int k = 0; k < 5; ++k) {
    auto [res, next] = qite_step(psi, h, 0.5, all_pauli_strings(2));
    CHECK((res.unitary.adjoint() * res.unitary - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(next.vector().norm() - 1.0) < 1e-12);
    CHECK_FALSE(res.flagged);
    psi = next;
  }
  const CMat g = random_unitary(4, rng);
  const CMat herm = 0.5 * (g + g.adjoint());
  const CMat u = exp_i_hermitian(herm);
  CHECK((u.adjoint() * u - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("noiseless traces on the NH3 fixtures", "[qite]") {
  const auto grid = load_grid(fixture("nh3/hono_luno"));
  REQUIRE(grid.size() == 13);
  for (const auto &e : grid) {
    const PauliSum h = read_pauli(e.path);
    const QiteTrace t = qite_run(h, QuantumState::basis(2, 0), QiteConfig{});
    // beta = 0 reports the reference energy.
    CHECK(t.steps.front().beta == 0.0);
    CHECK_THAT(t.steps.front().energy, WithinAbs(expectation(QuantumState::basis(2, 0), h), 1e-12));
    for (std::size_t k = 1; k < t.steps.size(); ++k) {
      CHECK_THAT(t.steps[k].beta - t.steps[k - 1].beta, WithinAbs(0.5, 1e-15));
      CHECK(t.steps[k].energy <= t.steps[k - 1].energy + 1e-12);
      CHECK(t.steps[k].cnots == 2);
    }
    CHECK(t.final_energy() >= fci(h).ground_energy() - 1e-10);
  }
  const QiteTrace t = qite_run(read_pauli(fixture("nh3/hono_luno/r1.00.txt")), QuantumState::basis(2, 0), QiteConfig{});
  CHECK(t.to_csv().rfind("beta,energy,x_norm,residual\n", 0) == 0);
}

TEST_CASE("sampled QITE with readout error stays near FCI before mitigation", "[qite][!mayfail]") {
  const NoiseModel ro = NoiseModel::readout(2, 0.02);
  for (const auto &e : load_grid(fixture("nh3/hono_luno"))) {
    const PauliSum h = read_pauli(e.path);
    QiteConfig cfg;
    cfg.shots = 8192;
    cfg.seed = 2026;
    cfg.noise = &ro;
    const QiteTrace t = qite_run(h, QuantumState::basis(2, 0), cfg);
    CHECK(std::abs(t.final_energy() - fci(h).ground_energy()) < 5e-3);
  }
}
