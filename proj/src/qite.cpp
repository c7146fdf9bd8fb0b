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

#include "iaoq/qite.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "iaoq/error.hpp"
#include "iaoq/kak.hpp"
#include "iaoq/rng.hpp"

namespace iaoq {

namespace {

PauliSum exp_hermitian(const PauliSum &h, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h.to_dense());
  const Vec w = (t * es.eigenvalues().array()).exp().matrix();
  const CMat m = es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return PauliSum::from_dense(m, 1e-15);
}

// <P a> for a Pauli string P and a Pauli sum a, from single-string values.
cplx product_expectation(const PauliString &p, const PauliSum &a, const PauliOracle &ev) {
  cplx acc = 0.0;
  for (const auto &[q, c] : a.terms()) {
    auto [phase, r] = multiply(p, q);
    acc += phase * c * ev(r);
  }
  return acc;
}

}  // namespace

void QiteConfig::validate(int n_qubits) const {
  if (!(dtau > 0)) fail(ErrorKind::Config, "qite: dtau must be > 0");
  if (!(beta_total >= dtau)) fail(ErrorKind::Config, "qite: beta_total must be >= dtau");
  if (!(regularization >= 0)) fail(ErrorKind::Config, "qite: regularization must be >= 0");
  if (shots < 0) fail(ErrorKind::Config, "qite: shots must be >= 0");
  if (n_qubits > 7) fail(ErrorKind::Config, "qite: limited to 7 qubits");
  if (basis.empty() && n_qubits > 4)
    fail(ErrorKind::Config, "qite: an explicit expansion basis is required above 4 qubits");
  for (const auto &p : basis) {
    if (p.is_identity()) fail(ErrorKind::Config, "qite: identity in the expansion basis");
    if (p.support() >> n_qubits) fail(ErrorKind::Config, "qite: basis string exceeds the qubit count");
  }
}

int QiteConfig::n_steps() const {
  return static_cast<int>(std::floor(beta_total / dtau + 1e-9));
}

std::vector<PauliString> all_pauli_strings(int n, bool include_identity) {
  std::vector<PauliString> out;
  const std::uint64_t dim = 1ull << n;
  for (std::uint64_t x = 0; x < dim; ++x)
    for (std::uint64_t z = 0; z < dim; ++z)
      if (include_identity || x || z) out.push_back({x, z});
  return out;
}

std::vector<PauliString> qite_required_strings(const PauliSum &h_term, double dtau,
                                               const std::vector<PauliString> &basis,
                                               bool first_order) {
  std::set<PauliString> need;
  for (const auto &p : basis)
    for (const auto &q : basis) need.insert(multiply(p, q).second);
  std::vector<const PauliSum *> ops;
  PauliSum e(h_term.n_qubits()), e2(h_term.n_qubits());
  if (first_order) {
    ops.push_back(&h_term);
  } else {
    e = exp_hermitian(h_term, -dtau);
    e2 = exp_hermitian(h_term, -2.0 * dtau);
    ops = {&e, &e2};
  }
  for (const auto *op : ops)
    for (const auto &[q, c] : op->terms()) {
      need.insert(q);
      for (const auto &p : basis) need.insert(multiply(p, q).second);
    }
  return {need.begin(), need.end()};
}

CMat exp_i_hermitian(const CMat &g) {
  Eigen::SelfAdjointEigenSolver<CMat> es(g);
  CVec ph(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < ph.size(); ++k) ph(k) = std::exp(I_ * es.eigenvalues()(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

QiteStepResult qite_solve(const PauliOracle &expval, const PauliSum &h_term, double dtau,
                          const std::vector<PauliString> &basis, bool first_order,
                          double regularization, double residual_threshold) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  const int n = h_term.n_qubits();
  Mat s = Mat::Zero(m, m);  // Re(S + S^T)
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      auto [phase, r] = multiply(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]);
      s(i, j) += (phase * expval(r)).real();
      s(j, i) += (phase * expval(r)).real();
    }

  // rhs_mu = -2 Im <P_mu Delta>, Delta the normalized change per unit dtau.
  Vec rhs(m);
  double cos_alpha = 1.0;
  if (first_order) {
    for (Eigen::Index i = 0; i < m; ++i)
      rhs(i) = 2.0 * product_expectation(basis[static_cast<std::size_t>(i)], h_term, expval).imag();
  } else {
    const PauliSum e = exp_hermitian(h_term, -dtau);
    const PauliSum e2 = exp_hermitian(h_term, -2.0 * dtau);
    double c = 0.0, ee = 0.0;
    for (const auto &[q, v] : e2.terms()) c += v.real() * expval(q);
    for (const auto &[q, v] : e.terms()) ee += v.real() * expval(q);
    if (!(c > 0)) fail(ErrorKind::Numerical, "qite: non-positive normalization");
    const double root = std::sqrt(c);
    cos_alpha = ee / root;
    for (Eigen::Index i = 0; i < m; ++i)
      rhs(i) = -2.0 * product_expectation(basis[static_cast<std::size_t>(i)], e, expval).imag() /
               (root * dtau);
  }

  Mat reg = s;
  reg.diagonal().array() += regularization;
  const Vec a = reg.ldlt().solve(rhs);
  QiteStepResult out;
  out.residual = (s * a - rhs).norm() / std::max(1.0, rhs.norm());
  out.flagged = out.residual > residual_threshold;
  out.x = -dtau * a;
  if (!first_order) {
    // The step rotates by sin(alpha) = |G psi|; rescale to the target angle.
    const double sin_alpha = std::sqrt(std::max(0.0, 0.5 * out.x.dot(s * out.x)));
    if (sin_alpha > 1e-14) out.x *= std::atan2(sin_alpha, cos_alpha) / sin_alpha;
  }
  PauliSum g(n);
  for (Eigen::Index i = 0; i < m; ++i) g.add(basis[static_cast<std::size_t>(i)], out.x(i));
  out.unitary = exp_i_hermitian(g.to_dense());
  return out;
}

std::pair<QiteStepResult, QuantumState> qite_step(const QuantumState &state,
                                                  const PauliSum &h_term, double dtau,
                                                  const std::vector<PauliString> &basis,
                                                  bool first_order) {
  if (!state.is_pure()) fail(ErrorKind::InvalidInput, "qite_step: expected a pure state");
  if (!(dtau > 0)) fail(ErrorKind::InvalidInput, "qite_step: dtau must be > 0");
  auto ev = [&](const PauliString &p) { return expectation(state, p).real(); };
  QiteStepResult r = qite_solve(ev, h_term, dtau, basis, first_order);
  CVec psi = r.unitary * state.vector();
  psi.normalize();
  return {r, QuantumState::from_vector(psi)};
}

std::string QiteTrace::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17) << "beta,energy,x_norm,residual\n";
  for (const auto &s : steps)
    os << s.beta << ',' << s.energy << ',' << s.x_norm << ',' << s.residual << '\n';
  return os.str();
}

QiteTrace qite_run(const PauliSum &h, const QuantumState &initial, const QiteConfig &cfg) {
  const int n = h.n_qubits();
  if (initial.n_qubits() != n) fail(ErrorKind::InvalidInput, "qite: state and Hamiltonian widths differ");
  cfg.validate(n);
  if (!h.is_hermitian(1e-10)) fail(ErrorKind::InvalidInput, "qite: Hamiltonian is not Hermitian");
  const bool compact = cfg.compact && n == 2;
  if (cfg.noise && cfg.noise->has_gate_noise() && !compact)
    fail(ErrorKind::Config, "qite: gate noise needs the compacted 2-qubit circuit");
  const std::vector<PauliString> basis = cfg.basis.empty() ? all_pauli_strings(n) : cfg.basis;

  std::vector<PauliSum> terms;
  if (cfg.trotterize) {
    for (const auto &[p, c] : h.terms())
      if (!p.is_identity()) terms.push_back(PauliSum::term(n, p, c));
  } else {
    terms.push_back(h);
  }

  QiteTrace trace;
  trace.unitary = CMat::Identity(Eigen::Index(1) << n, Eigen::Index(1) << n);
  bool general = false;
  auto prepare = [&]() {
    if (compact) {
      KakResult kr = kak_compact(Eigen::Matrix4cd(trace.unitary));
      trace.circuit = kr.circuit;
      general = kr.general;
      trace.state = run(trace.circuit, initial, cfg.noise);
    } else if (initial.is_pure()) {
      trace.state = QuantumState::from_vector(trace.unitary * initial.vector());
    } else {
      trace.state = QuantumState::from_density(trace.unitary * initial.density() *
                                               trace.unitary.adjoint());
    }
  };
  auto energy = [&](std::uint64_t stream) {
    if (cfg.shots == 0) return expectation(trace.state, h);
    SamplingOptions so{cfg.shots, derive_seed(cfg.seed, stream), cfg.noise, cfg.calibration};
    return estimate(trace.state, h, so);
  };
  const std::uint64_t energy_stream = 1ull << 40;

  prepare();
  trace.steps.push_back({0.0, energy(energy_stream), 0.0, 0.0, false,
                         compact ? trace.circuit.cnot_count() : 0, general});
  const int n_steps = cfg.n_steps();
  for (int step = 1; step <= n_steps; ++step) {
    QiteStep rec;
    rec.beta = step * cfg.dtau;
    double xx = 0.0;
    for (std::size_t m = 0; m < terms.size(); ++m) {
      const auto strings = qite_required_strings(terms[m], cfg.dtau, basis, cfg.first_order);
      std::map<PauliString, double> values;
      if (cfg.shots == 0) {
        for (const auto &p : strings) values[p] = expectation(trace.state, p).real();
      } else {
        SamplingOptions so{cfg.shots,
                           derive_seed(cfg.seed, static_cast<std::uint64_t>(step) * terms.size() + m),
                           cfg.noise, cfg.calibration};
        const auto v = estimate_paulis(trace.state, strings, so);
        for (std::size_t k = 0; k < strings.size(); ++k) values[strings[k]] = v[k];
      }
      auto ev = [&](const PauliString &p) {
        auto it = values.find(p);
        if (it == values.end()) fail(ErrorKind::Numerical, "qite: missing Pauli expectation");
        return it->second;
      };
      QiteStepResult r = qite_solve(ev, terms[m], cfg.dtau, basis, cfg.first_order,
                                    cfg.regularization, cfg.residual_threshold);
      trace.unitary = (r.unitary * trace.unitary).eval();
      prepare();
      xx += r.x.squaredNorm();
      rec.residual = std::max(rec.residual, r.residual);
      rec.flagged = rec.flagged || r.flagged;
    }
    rec.x_norm = std::sqrt(xx);
    rec.energy = energy(energy_stream + static_cast<std::uint64_t>(step));
    rec.cnots = compact ? trace.circuit.cnot_count() : 0;
    rec.general = general;
    trace.steps.push_back(rec);
  }
  return trace;
}

}  // namespace iaoq
