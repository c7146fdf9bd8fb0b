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

#include "iaoq/simulator.hpp"

#include <cmath>
#include <json.hpp>
#include <random>
#include <sstream>

#include "iaoq/error.hpp"
#include "iaoq/kernels.hpp"
#include "iaoq/rng.hpp"

namespace iaoq {

namespace {

const Eigen::Matrix2cd &pauli_matrix(int k) {
  static const Eigen::Matrix2cd m[4] = {
      (Eigen::Matrix2cd() << 1, 0, 0, 1).finished(),
      (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
      (Eigen::Matrix2cd() << 0, -I_, I_, 0).finished(),
      (Eigen::Matrix2cd() << 1, 0, 0, -1).finished()};
  return m[k];
}

// Unitary conjugation of a density matrix viewed as a 2n-qubit vector:
// row index = low n bits, column index = high n bits.
void conj_1q(CMat &rho, int n, int q, const Eigen::Matrix2cd &u) {
  kernels::apply_1q(rho.data(), 2 * n, q, u);
  kernels::apply_1q(rho.data(), 2 * n, q + n, u.conjugate());
}

void conj_cnot(CMat &rho, int n, int c, int t) {
  kernels::apply_cnot(rho.data(), 2 * n, c, t);
  kernels::apply_cnot(rho.data(), 2 * n, c + n, t + n);
}

void conj_2q(CMat &rho, int n, int qa, int qb, const Eigen::Matrix4cd &u) {
  kernels::apply_2q(rho.data(), 2 * n, qa, qb, u);
  kernels::apply_2q(rho.data(), 2 * n, qa + n, qb + n, u.conjugate());
}

// Superoperator of a single-qubit channel on the (row, column) bit pair.
Eigen::Matrix4cd superoperator(const std::vector<Eigen::Matrix2cd> &kraus) {
  Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
  for (const auto &k : kraus)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int ap = 0; ap < 2; ++ap)
          for (int bp = 0; bp < 2; ++bp)
            s(a + 2 * b, ap + 2 * bp) += k(a, ap) * std::conj(k(b, bp));
  return s;
}

void apply_channel(CMat &rho, int n, int q, const Eigen::Matrix4cd &s) {
  kernels::apply_2q(rho.data(), 2 * n, q, q + n, s);
}

Eigen::Matrix4cd damping_channel(double g) {
  Eigen::Matrix2cd k0, k1;
  k0 << 1, 0, 0, std::sqrt(1.0 - g);
  k1 << 0, std::sqrt(g), 0, 0;
  return superoperator({k0, k1});
}

Eigen::Matrix4cd dephasing_channel(double p) {
  return superoperator({std::sqrt(1.0 - p) * pauli_matrix(0),
                        std::sqrt(p) * pauli_matrix(3)});
}

// rho -> (1 - p) rho + p/16 sum_P P rho P over the 16 two-qubit Paulis.
void depolarize(CMat &rho, int n, int qa, int qb, double p) {
  CMat acc = (1.0 - p) * rho;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CMat t = rho;
      conj_1q(t, n, qa, pauli_matrix(a));
      conj_1q(t, n, qb, pauli_matrix(b));
      acc += (p / 16.0) * t;
    }
  rho = acc;
}

void rotate_to_basis(cplx *v, int nbits, int q, char letter, int offset,
                     bool conjugate) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd h;
  h << r, r, r, -r;
  Eigen::Matrix2cd sdg;
  sdg << 1, 0, 0, -I_;
  if (conjugate) sdg = sdg.conjugate().eval();
  if (letter == 'Y') kernels::apply_1q(v, nbits, q + offset, sdg);
  if (letter == 'X' || letter == 'Y') kernels::apply_1q(v, nbits, q + offset, h);
}

char letter_at(const PauliString &p, int q) {
  bool x = (p.x >> q) & 1, z = (p.z >> q) & 1;
  return x ? (z ? 'Y' : 'X') : 'Z';
}

int parity(std::uint64_t v) { return __builtin_popcountll(v) & 1; }

}  // namespace

QuantumState QuantumState::basis(int n, std::uint64_t index) {
  if (n < 1 || n > 14) fail(ErrorKind::InvalidInput, "statevector limited to 1..14 qubits");
  if (index >= (1ull << n)) fail(ErrorKind::InvalidInput, "basis index out of range");
  QuantumState s;
  s.n_ = n;
  s.psi_ = CVec::Zero(Eigen::Index(1) << n);
  s.psi_(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

QuantumState QuantumState::from_vector(const CVec &psi) {
  int n = 0;
  while ((Eigen::Index(1) << n) < psi.size()) ++n;
  if ((Eigen::Index(1) << n) != psi.size() || n < 1 || n > 14)
    fail(ErrorKind::InvalidInput, "statevector dimension must be 2^n with 1 <= n <= 14");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    fail(ErrorKind::InvalidInput, "statevector not normalized");
  QuantumState s;
  s.n_ = n;
  s.psi_ = psi;
  return s;
}

QuantumState QuantumState::from_density(const CMat &rho) {
  int n = 0;
  while ((Eigen::Index(1) << n) < rho.rows()) ++n;
  if ((Eigen::Index(1) << n) != rho.rows() || rho.cols() != rho.rows() || n < 1 || n > 6)
    fail(ErrorKind::InvalidInput, "density matrix must be 2^n x 2^n with 1 <= n <= 6");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    fail(ErrorKind::InvalidInput, "density matrix not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > 1e-10)
    fail(ErrorKind::InvalidInput, "density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    fail(ErrorKind::InvalidInput, "density matrix not positive semidefinite");
  QuantumState s;
  s.n_ = n;
  s.pure_ = false;
  s.rho_ = rho;
  return s;
}

const CVec &QuantumState::vector() const {
  if (!pure_) fail(ErrorKind::InvalidInput, "state is a density matrix");
  return psi_;
}

const CMat &QuantumState::density() const {
  if (pure_) fail(ErrorKind::InvalidInput, "state is a statevector");
  return rho_;
}

CMat QuantumState::density_matrix() const {
  return pure_ ? CMat(psi_ * psi_.adjoint()) : rho_;
}

QuantumState QuantumState::to_density() const {
  if (!pure_) return *this;
  if (n_ > 6) fail(ErrorKind::InvalidInput, "density matrix limited to 6 qubits");
  QuantumState s;
  s.n_ = n_;
  s.pure_ = false;
  s.rho_ = psi_ * psi_.adjoint();
  return s;
}

NoiseModel NoiseModel::readout(int n, double p) {
  NoiseModel m;
  m.p1_given_0.assign(static_cast<std::size_t>(n), p);
  m.p0_given_1.assign(static_cast<std::size_t>(n), p);
  return m;
}

bool NoiseModel::has_gate_noise() const {
  return damping > 0 || dephasing > 0 || depolarizing > 0;
}

bool NoiseModel::has_readout() const {
  for (double p : p1_given_0)
    if (p > 0) return true;
  for (double p : p0_given_1)
    if (p > 0) return true;
  return false;
}

double NoiseModel::flip(int q, int bit) const {
  const auto &v = bit ? p0_given_1 : p1_given_0;
  return static_cast<std::size_t>(q) < v.size() ? v[static_cast<std::size_t>(q)] : 0.0;
}

void NoiseModel::validate() const {
  auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  for (double p : p1_given_0)
    if (!ok(p)) fail(ErrorKind::Config, "noise: readout probability outside [0,1]");
  for (double p : p0_given_1)
    if (!ok(p)) fail(ErrorKind::Config, "noise: readout probability outside [0,1]");
  if (!ok(damping) || !ok(dephasing) || !ok(depolarizing))
    fail(ErrorKind::Config, "noise: channel probability outside [0,1]");
}

QuantumState run(const Circuit &c, const QuantumState &initial,
                 const NoiseModel *noise) {
  const int n = initial.n_qubits();
  if (c.n_qubits() != n) fail(ErrorKind::InvalidInput, "circuit and state widths differ");
  if (noise) noise->validate();
  const bool gate_noise = noise && noise->has_gate_noise();

  if (!gate_noise && initial.is_pure()) {
    QuantumState out = initial;
    cplx *v = out.mutable_vector().data();
    for (const auto &g : c.gates()) {
      if (g.kind == GateKind::CNOT)
        kernels::apply_cnot(v, n, g.q0, g.q1);
      else if (g.kind == GateKind::SO4)
        kernels::apply_2q(v, n, g.q0, g.q1, two_qubit_matrix(g));
      else
        kernels::apply_1q(v, n, g.q0, gate_matrix(g));
    }
    return out;
  }

  QuantumState out = initial.to_density();
  CMat &rho = out.mutable_density();
  const Circuit flat = gate_noise ? expand_composites(c) : c;
  const Eigen::Matrix4cd damp = damping_channel(gate_noise ? noise->damping : 0.0);
  const Eigen::Matrix4cd deph = dephasing_channel(gate_noise ? noise->dephasing : 0.0);
  auto local_noise = [&](int q) {
    if (noise->damping > 0) apply_channel(rho, n, q, damp);
    if (noise->dephasing > 0) apply_channel(rho, n, q, deph);
  };
  for (const auto &g : flat.gates()) {
    if (g.kind == GateKind::CNOT)
      conj_cnot(rho, n, g.q0, g.q1);
    else if (g.kind == GateKind::SO4)
      conj_2q(rho, n, g.q0, g.q1, two_qubit_matrix(g));
    else
      conj_1q(rho, n, g.q0, gate_matrix(g));
    if (!gate_noise) continue;
    local_noise(g.q0);
    if (g.two_qubit()) {
      local_noise(g.q1);
      if (noise->depolarizing > 0) depolarize(rho, n, g.q0, g.q1, noise->depolarizing);
    }
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return out;
}

cplx expectation(const QuantumState &state, const PauliString &p) {
  const std::uint64_t dim = 1ull << state.n_qubits();
  cplx acc = 0.0;
  if (state.is_pure()) {
    const CVec &psi = state.vector();
    for (std::uint64_t j = 0; j < dim; ++j)
      acc += std::conj(psi(static_cast<Eigen::Index>(j ^ p.x))) * apply_phase(p, j) *
             psi(static_cast<Eigen::Index>(j));
  } else {
    const CMat &rho = state.density();
    for (std::uint64_t j = 0; j < dim; ++j)
      acc += apply_phase(p, j) *
             rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ p.x));
  }
  return acc;
}

double expectation(const QuantumState &state, const PauliSum &op) {
  if (op.n_qubits() != state.n_qubits())
    fail(ErrorKind::InvalidInput, "operator and state widths differ");
  if (!op.is_hermitian(1e-10)) fail(ErrorKind::InvalidInput, "operator is not Hermitian");
  cplx acc = 0.0;
  if (state.is_pure()) {
    CVec hpsi = op.apply(state.vector());
    acc = state.vector().dot(hpsi);
  } else {
    for (const auto &[p, c] : op.terms()) acc += c * expectation(state, p);
  }
  if (std::abs(acc.imag()) > 1e-10 * (1.0 + op.one_norm()))
    fail(ErrorKind::Numerical, "expectation value has an imaginary part");
  return acc.real();
}

double CountsHistogram::total() const {
  double t = 0.0;
  for (const auto &kv : counts) t += kv.second;
  return t;
}

double CountsHistogram::probability(std::uint64_t outcome) const {
  auto it = counts.find(outcome);
  double t = total();
  return (it == counts.end() || t == 0.0) ? 0.0 : it->second / t;
}

std::string CountsHistogram::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto &[k, v] : counts) {
    std::string bits(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q)
      if ((k >> q) & 1) bits[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
    j[bits] = v;
  }
  return j.dump();
}

CountsHistogram CountsHistogram::from_json(const std::string &text, int n_qubits) {
  CountsHistogram h;
  h.n_qubits = n_qubits;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorKind::InvalidInput, std::string("counts: malformed JSON: ") + e.what());
  }
  for (const auto &[bits, v] : j.items()) {
    if (static_cast<int>(bits.size()) != n_qubits)
      fail(ErrorKind::InvalidInput, "counts: bitstring length mismatch");
    std::uint64_t k = 0;
    for (int q = 0; q < n_qubits; ++q) {
      char c = bits[static_cast<std::size_t>(n_qubits - 1 - q)];
      if (c != '0' && c != '1') fail(ErrorKind::InvalidInput, "counts: invalid bitstring");
      if (c == '1') k |= 1ull << q;
    }
    h.counts[k] = v.get<double>();
  }
  return h;
}

CountsHistogram sample(const QuantumState &state, const PauliString &basis,
                       int shots, std::uint64_t seed, const NoiseModel *noise) {
  if (shots < 1) fail(ErrorKind::InvalidInput, "shots must be >= 1");
  const int n = state.n_qubits();
  const std::uint64_t dim = 1ull << n;
  std::vector<double> probs(dim);
  if (state.is_pure()) {
    CVec v = state.vector();
    for (int q = 0; q < n; ++q) rotate_to_basis(v.data(), n, q, letter_at(basis, q), 0, false);
    for (std::uint64_t i = 0; i < dim; ++i) probs[i] = std::norm(v(static_cast<Eigen::Index>(i)));
  } else {
    CMat rho = state.density();
    for (int q = 0; q < n; ++q) {
      rotate_to_basis(rho.data(), 2 * n, q, letter_at(basis, q), 0, false);
      rotate_to_basis(rho.data(), 2 * n, q, letter_at(basis, q), n, true);
    }
    for (std::uint64_t i = 0; i < dim; ++i)
      probs[i] = std::max(0.0, rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real());
  }
  auto rng = make_rng(seed);
  std::discrete_distribution<std::uint64_t> dist(probs.begin(), probs.end());
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const bool readout = noise && noise->has_readout();
  CountsHistogram h;
  h.n_qubits = n;
  for (int s = 0; s < shots; ++s) {
    std::uint64_t o = dist(rng);
    if (readout)
      for (int q = 0; q < n; ++q)
        if (uni(rng) < noise->flip(q, static_cast<int>((o >> q) & 1))) o ^= 1ull << q;
    h.counts[o] += 1.0;
  }
  return h;
}

void CalibrationMatrix::validate() const {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  if (m.rows() != dim || m.cols() != dim)
    fail(ErrorKind::InvalidInput, "calibration matrix has the wrong size");
  if (m.minCoeff() < 0) fail(ErrorKind::InvalidInput, "calibration matrix has negative entries");
  for (Eigen::Index j = 0; j < dim; ++j)
    if (std::abs(m.col(j).sum() - 1.0) > 1e-12)
      fail(ErrorKind::InvalidInput, "calibration matrix columns must sum to 1");
}

CalibrationMatrix build_calibration(const NoiseModel &noise, int n_qubits,
                                    int shots, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > 4)
    fail(ErrorKind::InvalidInput, "calibration limited to 1..4 qubits");
  noise.validate();
  const std::uint64_t dim = 1ull << n_qubits;
  CalibrationMatrix cal;
  cal.n_qubits = n_qubits;
  cal.m = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t j = 0; j < dim; ++j) {
    if (shots == 0) {
      for (std::uint64_t i = 0; i < dim; ++i) {
        double p = 1.0;
        for (int q = 0; q < n_qubits; ++q) {
          int bj = static_cast<int>((j >> q) & 1), bi = static_cast<int>((i >> q) & 1);
          double f = noise.flip(q, bj);
          p *= (bi == bj) ? 1.0 - f : f;
        }
        cal.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p;
      }
    } else {
      CountsHistogram h = sample(QuantumState::basis(n_qubits, j), PauliString{}, shots,
                                 derive_seed(seed, j), &noise);
      for (const auto &[i, c] : h.counts)
        cal.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c / shots;
    }
  }
  return cal;
}

CountsHistogram mitigate(const CountsHistogram &counts, const CalibrationMatrix &calib) {
  if (counts.n_qubits != calib.n_qubits)
    fail(ErrorKind::InvalidInput, "counts and calibration widths differ");
  const Eigen::Index dim = Eigen::Index(1) << calib.n_qubits;
  if (calib.m.rows() != dim) fail(ErrorKind::InvalidInput, "calibration matrix has the wrong size");
  Vec c = Vec::Zero(dim);
  for (const auto &[k, v] : counts.counts) c(static_cast<Eigen::Index>(k)) = v;
  const double total = c.sum();
  Eigen::ColPivHouseholderQR<Mat> qr(calib.m);
  qr.setThreshold(1e-12);
  if (qr.rank() < dim) fail(ErrorKind::Numerical, "calibration matrix is singular");
  Vec x = qr.solve(c);
  x = x.cwiseMax(0.0);
  const double s = x.sum();
  if (!(s > 0)) fail(ErrorKind::Numerical, "mitigated counts vanish");
  x *= total / s;
  CountsHistogram out;
  out.n_qubits = counts.n_qubits;
  for (Eigen::Index k = 0; k < dim; ++k)
    if (x(k) != 0.0) out.counts[static_cast<std::uint64_t>(k)] = x(k);
  return out;
}

std::vector<std::vector<std::size_t>> group_qubitwise(const std::vector<PauliString> &strings) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<PauliString> bases;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    const PauliString &p = strings[i];
    bool placed = false;
    for (std::size_t g = 0; g < groups.size() && !placed; ++g) {
      if (!bases[g].qubitwise_commutes_with(p)) continue;
      groups[g].push_back(i);
      bases[g].x |= p.x;
      bases[g].z |= p.z;
      placed = true;
    }
    if (!placed) {
      groups.push_back({i});
      bases.push_back(p);
    }
  }
  return groups;
}

std::vector<double> estimate_paulis(const QuantumState &state,
                                    const std::vector<PauliString> &strings,
                                    const SamplingOptions &opt) {
  std::vector<double> out(strings.size(), 1.0);
  if (opt.shots == 0) {
    for (std::size_t i = 0; i < strings.size(); ++i)
      out[i] = expectation(state, strings[i]).real();
    return out;
  }
  if (opt.shots < 0) fail(ErrorKind::Config, "shots must be >= 0");
  std::vector<PauliString> nontrivial;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < strings.size(); ++i)
    if (!strings[i].is_identity()) {
      nontrivial.push_back(strings[i]);
      where.push_back(i);
    }
  auto groups = group_qubitwise(nontrivial);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    PauliString basis;
    for (auto i : groups[g]) {
      basis.x |= nontrivial[i].x;
      basis.z |= nontrivial[i].z;
    }
    CountsHistogram h = sample(state, basis, opt.shots, derive_seed(opt.seed, g), opt.noise);
    if (opt.calibration) h = mitigate(h, *opt.calibration);
    const double total = h.total();
    for (auto i : groups[g]) {
      const std::uint64_t sup = nontrivial[i].support();
      double acc = 0.0;
      for (const auto &[k, c] : h.counts) acc += parity(k & sup) ? -c : c;
      out[where[i]] = acc / total;
    }
  }
  return out;
}

double estimate(const QuantumState &state, const PauliSum &op, const SamplingOptions &opt) {
  if (opt.shots == 0) return expectation(state, op);
  if (!op.is_hermitian(1e-10)) fail(ErrorKind::InvalidInput, "operator is not Hermitian");
  std::vector<PauliString> strings;
  std::vector<double> coeffs;
  for (const auto &[p, c] : op.terms()) {
    strings.push_back(p);
    coeffs.push_back(c.real());
  }
  auto vals = estimate_paulis(state, strings, opt);
  double e = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) e += coeffs[i] * vals[i];
  return e;
}

CMat qst(const QuantumState &state, const SamplingOptions &opt) {
  const int n = state.n_qubits();
  if (n > 3) fail(ErrorKind::InvalidInput, "tomography limited to 3 qubits");
  const std::uint64_t dim = 1ull << n;
  std::map<std::uint64_t, CountsHistogram> settings;  // key: base-3 letters
  auto setting_key = [&](const PauliString &p) {
    std::uint64_t key = 0;
    for (int q = n - 1; q >= 0; --q) {
      char l = letter_at(p, q);
      key = key * 3 + (l == 'X' ? 0 : l == 'Y' ? 1 : 2);
    }
    return key;
  };
  PauliSum rho_op(n);
  for (std::uint64_t x = 0; x < dim; ++x)
    for (std::uint64_t z = 0; z < dim; ++z) {
      PauliString p{x, z};
      double v = 1.0;
      if (!p.is_identity()) {
        if (opt.shots == 0) {
          v = expectation(state, p).real();
        } else {
          std::uint64_t key = setting_key(p);
          auto it = settings.find(key);
          if (it == settings.end()) {
            PauliString basis = p;
            for (int q = 0; q < n; ++q)
              if (!((p.support() >> q) & 1)) basis.z |= 1ull << q;
            CountsHistogram h = sample(state, basis, opt.shots, derive_seed(opt.seed, key), opt.noise);
            if (opt.calibration) h = mitigate(h, *opt.calibration);
            it = settings.emplace(key, h).first;
          }
          double acc = 0.0;
          for (const auto &[k, c] : it->second.counts)
            acc += parity(k & p.support()) ? -c : c;
          v = acc / it->second.total();
        }
      }
      rho_op.add(p, v / static_cast<double>(dim));
    }
  return rho_op.to_dense();
}

double purity(const CMat &rho) { return (rho * rho).trace().real(); }

double fidelity(const CMat &rho, std::uint64_t reference) {
  if (reference >= static_cast<std::uint64_t>(rho.rows()))
    fail(ErrorKind::InvalidInput, "reference index out of range");
  return rho(static_cast<Eigen::Index>(reference), static_cast<Eigen::Index>(reference)).real();
}

}  // namespace iaoq
