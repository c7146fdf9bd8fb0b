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
#include "iaoq/encoding.hpp"
#include "iaoq/error.hpp"
#include "iaoq/fci.hpp"
#include "iaoq/orbital_space.hpp"
#include "iaoq/vqe.hpp"
#include "support.hpp"

using namespace iaoq;
using namespace iaoq::testing;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = 3.14159265358979323846;

MOIntegrals h2_mo(const std::string &r) {
  const IntegralBundle b = load_bundle(fixture("h2_sto6g/r" + r));
  return ao2mo(b, b.mo_coeff);
}

AnsatzSpec spec_of(AnsatzSpec::Kind kind, int n, int depth = 1) {
  AnsatzSpec s;
  s.kind = kind;
  s.n_qubits = n;
  s.depth = depth;
  return s;
}

AnsatzSpec h2_quccsd() {
  AnsatzSpec s = spec_of(AnsatzSpec::Kind::QUCCSD, 4);
  s.occupied = {0, 2};
  s.virtuals = {1, 3};
  s.reference = 0b0101;
  return s;
}

PauliSum encoded_h2(const std::string &r) {
  return TwoOrbitalEncoding::encode_operator(map_hamiltonian(h2_mo(r)));
}

PauliSum read_pauli(const std::string &rel) {
  std::ifstream in(fixture(rel));
  std::stringstream ss;
  ss << in.rdbuf();
  return PauliSum::from_text(ss.str());
}

Vec random_theta(int n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  Vec t(n);
  for (int i = 0; i < n; ++i) t(i) = u(rng);
  return t;
}

Vec central_difference(EnergyEvaluator &ev, const Vec &theta, double h = 1e-5) {
  Vec g(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Vec p = theta, m = theta;
    p(i) += h;
    m(i) -= h;
    g(i) = (ev.energy(p) - ev.energy(m)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("parameter counts and validation", "[vqe]") {
  CHECK(spec_of(AnsatzSpec::Kind::Ry, 4, 2).n_params() == 12);
  CHECK(spec_of(AnsatzSpec::Kind::SO4, 2, 1).n_params() == 6);
  CHECK(spec_of(AnsatzSpec::Kind::SO4, 4, 2).n_params() == 36);
  CHECK(h2_quccsd().n_params() == 3);
  const auto ex = quccsd_excitations(h2_quccsd());
  REQUIRE(ex.size() == 3);
  CHECK(ex[0].first.size() == 1);
  CHECK(ex[2].first.size() == 2);

  const AnsatzSpec so4 = spec_of(AnsatzSpec::Kind::SO4, 2);
  const Circuit c = build_circuit(so4, Vec::Zero(6));
  CHECK(c.n_params() == 6);
  CHECK(expand_composites(c).cnot_count() == 2);
  CHECK_THROWS_AS(build_circuit(so4, Vec::Zero(5)), Error);
  CHECK_THROWS_AS(spec_of(AnsatzSpec::Kind::Ry, 2, 0).validate(), Error);
  AnsatzSpec bad_pair = so4;
  bad_pair.pairs = {{0, 2}};
  CHECK_THROWS_AS(bad_pair.validate(), Error);
  AnsatzSpec overlap = h2_quccsd();
  overlap.virtuals = {0, 3};
  CHECK_THROWS_AS(overlap.validate(), Error);
  CHECK_THROWS_AS(AnsatzSpec::parse_kind("uccsdt"), Error);
  CHECK(AnsatzSpec::parse_kind("so4") == AnsatzSpec::Kind::SO4);
}

TEST_CASE("zero parameters prepare the reference determinant", "[vqe]") {
  for (auto kind : {AnsatzSpec::Kind::Ry, AnsatzSpec::Kind::SO4}) {
    AnsatzSpec s = spec_of(kind, 4, 2);
    s.reference = 0b0101;
    EnergyEvaluator ev(s, PauliSum::identity(4));
    const CVec psi = ev.state(Vec::Zero(s.n_params())).vector();
    CHECK(std::abs(std::abs(psi(0b0101)) - 1.0) < 1e-12);
  }
  const MOIntegrals mo = h2_mo("0.74");
  EnergyEvaluator ev(h2_quccsd(), map_hamiltonian(mo));
  CHECK(std::abs(std::abs(ev.state(Vec::Zero(3)).vector()(0b0101)) - 1.0) < 1e-12);
  CHECK_THAT(ev.energy(Vec::Zero(3)), WithinAbs(rhf_energy(mo, 1), 1e-10));
  EnergyEvaluator enc(spec_of(AnsatzSpec::Kind::SO4, 2), encoded_h2("0.74"));
  CHECK_THAT(enc.energy(Vec::Zero(6)), WithinAbs(rhf_energy(mo, 1), 1e-10));
}

TEST_CASE("single-qubit Ry gradient has the closed form", "[vqe]") {
  // Two rotation layers on one qubit: E = cos(t0 + t1).
  EnergyEvaluator ev(spec_of(AnsatzSpec::Kind::Ry, 1, 1), PauliSum::term(1, "Z"));
  Vec t(2);
  t << 0.3, 0.0;
  CHECK_THAT(ev.energy(t), WithinAbs(std::cos(0.3), 1e-12));
  const Vec g = ev.gradient(t);
  CHECK_THAT(g(0), WithinAbs(-std::sin(0.3), 1e-8));
  CHECK_THAT(g(1), WithinAbs(-std::sin(0.3), 1e-8));
}

TEST_CASE("parameter shift agrees with finite differences", "[vqe]") {
  std::mt19937_64 rng(51);
  const MOIntegrals mo = h2_mo("1.00");
  const PauliSum h4 = map_hamiltonian(mo);
  AnsatzSpec ry = spec_of(AnsatzSpec::Kind::Ry, 4, 2);
  ry.reference = 0b0101;
  std::vector<std::pair<AnsatzSpec, PauliSum>> cases{
      {ry, h4}, {spec_of(AnsatzSpec::Kind::SO4, 2), encoded_h2("1.00")}, {h2_quccsd(), h4}};
  for (auto &[spec, h] : cases) {
    EnergyEvaluator ev(spec, h);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const Vec t = random_theta(spec.n_params(), rng);
      worst = std::max(worst, (ev.gradient(t) - central_difference(ev, t)).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("SO4 gradient costs twelve evaluations per gate", "[vqe]") {
  for (int n : {2, 3}) {
    EnergyEvaluator ev(spec_of(AnsatzSpec::Kind::SO4, n), PauliSum::term(n, std::string(n, 'Z')));
    const long before = ev.evaluations();
    ev.gradient(Vec::Constant(ev.spec().n_params(), 0.2));
    CHECK(ev.evaluations() - before == 12L * (n - 1));
  }
}

TEST_CASE("variational bound over random parameters", "[vqe]") {
  std::mt19937_64 rng(52);
  const MOIntegrals mo = h2_mo("1.50");
  const PauliSum h = map_hamiltonian(mo);
  const double e_fci = fci(mo, 2).ground_energy();
  AnsatzSpec ry = spec_of(AnsatzSpec::Kind::Ry, 4, 2);
  ry.reference = 0b0101;
  EnergyEvaluator ev(ry, h);
  for (int trial = 0; trial < 200; ++trial) CHECK(ev.energy(random_theta(ry.n_params(), rng)) >= e_fci - 1e-9);
}

TEST_CASE("q-UCCSD reaches FCI for H2", "[vqe]") {
  for (const char *r : {"0.50", "0.74", "1.50", "3.00"}) {
    const MOIntegrals mo = h2_mo(r);
    EnergyEvaluator ev(h2_quccsd(), map_hamiltonian(mo));
    const VQEResult res = minimize_exact(ev, Vec::Zero(3));
    CHECK_THAT(res.energy, WithinAbs(fci(mo, 2).ground_energy(), 1e-7));
    CHECK(ev.gradient(res.parameters).norm() < 1e-6);
    // Restarting at the optimum stays there.
    const VQEResult again = minimize_exact(ev, res.parameters);
    CHECK_THAT(again.energy, WithinAbs(res.energy, 1e-12));
  }
}

TEST_CASE("gradient descent on a quadratic", "[vqe]") {
  auto f = [](const Vec &t) { return (t(0) - 1.3) * (t(0) - 1.3) + 0.7; };
  auto g = [](const Vec &t) { return Vec::Constant(1, 2 * (t(0) - 1.3)); };
  const VQEResult r = gradient_descent(f, g, Vec::Zero(1), LineSearch{}, 3);
  CHECK(r.trace.size() <= 3);
  CHECK_THAT(r.parameters(0), WithinAbs(1.3, 1e-6));
  CHECK_THAT(r.energy, WithinAbs(0.7, 1e-12));
  CHECK_THROWS_AS(gradient_descent(f, g, Vec::Zero(1), LineSearch{1, 2.0, 1e-4}), Error);
}

TEST_CASE("gradient descent and BFGS agree on H2", "[vqe]") {
  const PauliSum h = encoded_h2("0.74");
  EnergyEvaluator a(spec_of(AnsatzSpec::Kind::SO4, 2), h), b(spec_of(AnsatzSpec::Kind::SO4, 2), h);
  const VQEResult gd = gradient_descent(a, Vec::Zero(6));
  const VQEResult qn = minimize_exact(b, Vec::Zero(6));
  CHECK_THAT(gd.energy, WithinAbs(qn.energy, 1e-6));
  for (std::size_t k = 1; k < gd.trace.size(); ++k) CHECK(gd.trace[k].energy <= gd.trace[k - 1].energy + 1e-12);
  CHECK(qn.to_json().find("\"energy\"") != std::string::npos);
}

TEST_CASE("SO4 descent on the NH3 two-qubit fixture reaches FCI", "[vqe]") {
  const PauliSum h = read_pauli("nh3/hono_luno/r1.00.txt");
  const double e_fci = fci(h).ground_energy();
  EnergyEvaluator ev(spec_of(AnsatzSpec::Kind::SO4, 2), h);
  const VQEResult r = gradient_descent(ev, Vec::Zero(6), LineSearch{}, 500);
  CHECK_THAT(r.energy, WithinAbs(e_fci, 1e-8));
}

TEST_CASE("sampled energies sit above FCI and mitigation narrows the gap", "[vqe]") {
  const PauliSum h = encoded_h2("0.74");
  const double e_fci = fci(h).ground_energy();
  EnergyEvaluator exact(spec_of(AnsatzSpec::Kind::SO4, 2), h);
  const Vec opt = minimize_exact(exact, Vec::Zero(6)).parameters;
  const NoiseModel ro = NoiseModel::readout(2, 0.05);
  const CalibrationMatrix cal = build_calibration(ro, 2, 8192, 3);
  EvalOptions raw_opt{8192, 11, &ro, nullptr};
  EvalOptions mit_opt{8192, 11, &ro, &cal};
  EnergyEvaluator raw(spec_of(AnsatzSpec::Kind::SO4, 2), h, raw_opt);
  EnergyEvaluator mit(spec_of(AnsatzSpec::Kind::SO4, 2), h, mit_opt);
  const double e_raw = raw.energy(opt), e_mit = mit.energy(opt);
  CHECK(e_raw > e_fci);
  CHECK(std::abs(e_mit - e_fci) < std::abs(e_raw - e_fci));
}
