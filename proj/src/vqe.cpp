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

#include "iaoq/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <set>

#include "iaoq/error.hpp"
#include "iaoq/rng.hpp"

namespace iaoq {

namespace {

constexpr double kPi = std::numbers::pi;

int spin_of(int q, int n_orb) { return q >= n_orb ? 1 : 0; }

PauliSum fermion_op(int q, int n_orb, bool create) {
  const Spin s = q < n_orb ? Spin::Up : Spin::Down;
  const int p = q % n_orb;
  return create ? jw_creation(p, s, n_orb) : jw_annihilation(p, s, n_orb);
}

// exp(-i phi/2 P) with phi = scale * theta[param].
void pauli_rotation(Circuit &c, const PauliString &p, int param, double scale) {
  std::vector<int> support;
  for (int q = 0; q < c.n_qubits(); ++q)
    if ((p.support() >> q) & 1) support.push_back(q);
  if (support.empty()) return;
  auto letter = [&](int q) {
    bool x = (p.x >> q) & 1, z = (p.z >> q) & 1;
    return x ? (z ? 'Y' : 'X') : 'Z';
  };
  for (int q : support) {
    if (letter(q) == 'Y') c.sdg(q);
    if (letter(q) != 'Z') c.h(q);
  }
  for (std::size_t k = 0; k + 1 < support.size(); ++k) c.cnot(support[k], support[k + 1]);
  c.rz(support.back(), 0.0, param, scale);
  for (std::size_t k = support.size() - 1; k > 0; --k) c.cnot(support[k - 1], support[k]);
  for (int q : support) {
    if (letter(q) != 'Z') c.h(q);
    if (letter(q) == 'Y') c.s(q);
  }
}

// Inverse of the time-ordered ladder CNOT(n-2 -> n-1), ..., CNOT(0 -> 1).
std::uint64_t undo_ladder(std::uint64_t bits, int n) {
  for (int i = 0; i < n - 1; ++i)
    if ((bits >> i) & 1) bits ^= 1ull << (i + 1);
  return bits;
}

void prepare(Circuit &c, std::uint64_t bits) {
  for (int q = 0; q < c.n_qubits(); ++q)
    if ((bits >> q) & 1) c.x(q);
}

}  // namespace

AnsatzSpec::Kind AnsatzSpec::parse_kind(const std::string &s) {
  if (s == "ry") return Kind::Ry;
  if (s == "so4") return Kind::SO4;
  if (s == "quccsd") return Kind::QUCCSD;
  fail(ErrorKind::Config, "ansatz: unknown kind '" + s + "' (expected ry, so4, quccsd)");
}

std::vector<std::pair<int, int>> AnsatzSpec::pair_set() const {
  if (!pairs.empty()) return pairs;
  std::vector<std::pair<int, int>> chain;
  for (int i = 0; i + 1 < n_qubits; ++i) chain.emplace_back(i, i + 1);
  return chain;
}

void AnsatzSpec::validate() const {
  if (n_qubits < 1 || n_qubits > 14) fail(ErrorKind::Config, "ansatz: qubit count must be in 1..14");
  if (depth < 1) fail(ErrorKind::Config, "ansatz: depth must be >= 1");
  if (reference >= (1ull << n_qubits)) fail(ErrorKind::Config, "ansatz: reference exceeds qubit count");
  if (kind == Kind::SO4) {
    if (n_qubits < 2) fail(ErrorKind::Config, "ansatz: so4 needs at least 2 qubits");
    for (auto [i, j] : pair_set())
      if (i < 0 || j < 0 || i >= n_qubits || j >= n_qubits || i == j)
        fail(ErrorKind::Config, "ansatz: so4 pair outside the qubit range");
  }
  if (kind == Kind::QUCCSD) {
    if (n_qubits % 2) fail(ErrorKind::Config, "ansatz: quccsd needs an even qubit count");
    std::set<int> seen;
    for (const auto *list : {&occupied, &virtuals})
      for (int q : *list) {
        if (q < 0 || q >= n_qubits) fail(ErrorKind::Config, "ansatz: quccsd orbital outside the qubit range");
        if (!seen.insert(q).second) fail(ErrorKind::Config, "ansatz: quccsd occupied and virtual lists overlap");
      }
  }
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> quccsd_excitations(
    const AnsatzSpec &spec) {
  const int n_orb = spec.n_qubits / 2;
  std::vector<int> occ = spec.occupied, vir = spec.virtuals;
  std::sort(occ.begin(), occ.end());
  std::sort(vir.begin(), vir.end());
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  for (int i : occ)
    for (int a : vir)
      if (spin_of(i, n_orb) == spin_of(a, n_orb)) out.push_back({{i}, {a}});
  for (std::size_t i = 0; i < occ.size(); ++i)
    for (std::size_t j = i + 1; j < occ.size(); ++j)
      for (std::size_t a = 0; a < vir.size(); ++a)
        for (std::size_t b = a + 1; b < vir.size(); ++b)
          if (spin_of(occ[i], n_orb) + spin_of(occ[j], n_orb) ==
              spin_of(vir[a], n_orb) + spin_of(vir[b], n_orb))
            out.push_back({{occ[i], occ[j]}, {vir[a], vir[b]}});
  return out;
}

int AnsatzSpec::n_params() const {
  switch (kind) {
    case Kind::Ry:
      return n_qubits * (depth + 1);
    case Kind::SO4:
      return 6 * static_cast<int>(pair_set().size()) * depth;
    case Kind::QUCCSD:
      return static_cast<int>(quccsd_excitations(*this).size());
  }
  return 0;
}

Circuit ansatz_template(const AnsatzSpec &spec) {
  spec.validate();
  const int n = spec.n_qubits;
  Circuit c(n);
  switch (spec.kind) {
    case AnsatzSpec::Kind::Ry: {
      std::uint64_t ref = spec.reference;
      for (int l = 0; l < spec.depth; ++l) ref = undo_ladder(ref, n);
      prepare(c, ref);
      for (int l = spec.depth - 1; l >= 0; --l) {
        for (int i = 0; i < n; ++i) c.ry(i, 0.0, l * n + i);
        for (int i = n - 2; i >= 0; --i) c.cnot(i, i + 1);
      }
      for (int i = 0; i < n; ++i) c.ry(i, 0.0, spec.depth * n + i);
      break;
    }
    case AnsatzSpec::Kind::SO4: {
      prepare(c, spec.reference);
      const auto pairs = spec.pair_set();
      const int np = static_cast<int>(pairs.size());
      for (int l = spec.depth - 1; l >= 0; --l)
        for (int k = np - 1; k >= 0; --k) {
          c.so4(pairs[static_cast<std::size_t>(k)].first,
                pairs[static_cast<std::size_t>(k)].second, {});
          Gate &g = c.gates().back();
          for (int j = 0; j < 6; ++j) g.param[static_cast<std::size_t>(j)] = (l * np + k) * 6 + j;
        }
      break;
    }
    case AnsatzSpec::Kind::QUCCSD: {
      prepare(c, spec.reference);
      const int n_orb = n / 2;
      const auto exc = quccsd_excitations(spec);
      for (std::size_t k = 0; k < exc.size(); ++k) {
        const auto &[from, to] = exc[k];
        PauliSum t = PauliSum::identity(n);
        for (int a : to) t = t * fermion_op(a, n_orb, true);
        for (auto it = from.rbegin(); it != from.rend(); ++it) t = t * fermion_op(*it, n_orb, false);
        const PauliSum gen = (t - t.adjoint()).simplified(1e-14);
        // gen = sum_k i r_k P_k; exp(theta gen) = prod_k exp(-i (-2 r_k theta)/2 P_k).
        for (const auto &[p, coef] : gen.terms()) {
          if (std::abs(coef.real()) > 1e-12)
            fail(ErrorKind::Numerical, "ansatz: excitation generator is not anti-Hermitian");
          pauli_rotation(c, p, static_cast<int>(k), -2.0 * coef.imag());
        }
      }
      break;
    }
  }
  return c;
}

Circuit build_circuit(const AnsatzSpec &spec, const Vec &theta) {
  if (theta.size() != spec.n_params())
    fail(ErrorKind::InvalidInput, "ansatz: expected " + std::to_string(spec.n_params()) +
                                      " parameters, got " + std::to_string(theta.size()));
  Circuit c = ansatz_template(spec);
  c.bind(theta);
  return c;
}

EnergyEvaluator::EnergyEvaluator(AnsatzSpec spec, PauliSum h, EvalOptions opt)
    : spec_(std::move(spec)), h_(std::move(h)), opt_(opt), template_(ansatz_template(spec_)) {
  if (h_.n_qubits() != spec_.n_qubits)
    fail(ErrorKind::InvalidInput, "vqe: Hamiltonian and ansatz widths differ");
  if (opt_.shots < 0) fail(ErrorKind::Config, "vqe: shots must be >= 0");
}

QuantumState EnergyEvaluator::state(const Vec &theta) const {
  Circuit c = build_circuit(spec_, theta);
  return run(c, QuantumState::basis(spec_.n_qubits, 0), opt_.noise);
}

double EnergyEvaluator::energy(const Circuit &c) {
  QuantumState st = run(c, QuantumState::basis(spec_.n_qubits, 0), opt_.noise);
  const std::uint64_t k = static_cast<std::uint64_t>(evaluations_++);
  if (opt_.shots == 0) return expectation(st, h_);
  SamplingOptions so{opt_.shots, derive_seed(opt_.seed, k), opt_.noise, opt_.calibration};
  return estimate(st, h_, so);
}

double EnergyEvaluator::energy(const Vec &theta) {
  return energy(build_circuit(spec_, theta));
}

Vec EnergyEvaluator::gradient(const Vec &theta) {
  Circuit c = build_circuit(spec_, theta);
  Vec g = Vec::Zero(theta.size());
  for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
    const Gate &gate = c.gates()[gi];
    for (int k = 0; k < gate.n_angles(); ++k) {
      const int p = gate.param[static_cast<std::size_t>(k)];
      if (p < 0) continue;
      Circuit plus = c, minus = c;
      plus.gates()[gi].angles[static_cast<std::size_t>(k)] += kPi / 2;
      minus.gates()[gi].angles[static_cast<std::size_t>(k)] -= kPi / 2;
      g(p) += gate.scale[static_cast<std::size_t>(k)] * 0.5 * (energy(plus) - energy(minus));
    }
  }
  return g;
}

std::string VQEResult::to_json() const {
  nlohmann::ordered_json j;
  j["energy"] = energy;
  j["parameters"] = std::vector<double>(parameters.data(), parameters.data() + parameters.size());
  j["converged"] = converged;
  j["iterations"] = trace.size();
  j["evaluations"] = evaluations;
  nlohmann::ordered_json t = nlohmann::ordered_json::array();
  for (const auto &e : trace)
    t.push_back({{"energy", e.energy}, {"gradient_norm", e.gradient_norm}, {"step", e.step}});
  j["trace"] = t;
  return j.dump(1);
}

VQEResult gradient_descent(const Objective &f, const Gradient &grad, Vec theta,
                           const LineSearch &ls, int max_iter, double tol) {
  if (ls.grid_points < 2 || !(ls.lambda_max > 0) || !(ls.tol > 0))
    fail(ErrorKind::Config, "line search: need >= 2 grid points, positive range and tolerance");
  VQEResult res;
  double e = f(theta);
  for (int it = 0; it < max_iter; ++it) {
    const Vec g = grad(theta);
    const double gn = g.norm();
    if (gn < 1e-12) {
      res.converged = true;
      break;
    }
    auto phi = [&](double lam) { return f(theta - lam * g); };
    const int m = ls.grid_points;
    std::vector<double> lam(static_cast<std::size_t>(m)), val(static_cast<std::size_t>(m));
    std::size_t best = 0;
    for (int k = 0; k < m; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      lam[ku] = ls.lambda_max * k / (m - 1);
      val[ku] = k == 0 ? e : phi(lam[ku]);
      if (val[ku] < val[best]) best = ku;
    }
    double a = lam[best == 0 ? 0 : best - 1];
    double b = lam[std::min(best + 1, lam.size() - 1)];
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = phi(c), fd = phi(d);
    while (b - a > ls.tol) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - r * (b - a);
        fc = phi(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + r * (b - a);
        fd = phi(d);
      }
    }
    double step = lam[best], e_new = val[best];
    const double mid = 0.5 * (a + b), f_mid = phi(mid);
    if (f_mid < e_new) {
      step = mid;
      e_new = f_mid;
    }
    theta -= step * g;
    res.trace.push_back({e_new, gn, step});
    const double change = std::abs(e_new - e);
    e = e_new;
    if (change < tol) {
      res.converged = true;
      break;
    }
  }
  res.energy = e;
  res.parameters = theta;
  return res;
}

VQEResult bfgs(const Objective &f, const Gradient &grad, Vec x, int max_iter, double gtol) {
  const Eigen::Index n = x.size();
  VQEResult res;
  double fx = f(x);
  Vec g = grad(x);
  Mat hinv = Mat::Identity(n, n);
  bool scaled = false;
  int stalls = 0;
  for (int it = 0; it < max_iter; ++it) {
    const double gn = g.norm();
    if (gn < gtol) {
      res.converged = true;
      break;
    }
    Vec p = -hinv * g;
    if (g.dot(p) >= 0) {
      hinv.setIdentity();
      p = -g;
    }
    double alpha = 1.0, f_new = f(x + p);
    while (f_new > fx + 1e-4 * alpha * g.dot(p) && alpha > 1e-12) {
      alpha *= 0.5;
      f_new = f(x + alpha * p);
    }
    if (alpha <= 1e-12) break;
    const Vec s = alpha * p;
    x += s;
    const Vec g_new = grad(x);
    const Vec y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      if (!scaled) {
        hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Mat left = Mat::Identity(n, n) - rho * s * y.transpose();
      hinv = left * hinv * left.transpose() + rho * s * s.transpose();
    }
    res.trace.push_back({f_new, gn, alpha});
    stalls = std::abs(fx - f_new) < 1e-15 * (1.0 + std::abs(fx)) ? stalls + 1 : 0;
    fx = f_new;
    g = g_new;
    if (stalls >= 3) {
      res.converged = g.norm() < 1e-6;
      break;
    }
  }
  if (!res.converged && g.norm() < gtol) res.converged = true;
  res.energy = fx;
  res.parameters = x;
  return res;
}

VQEResult gradient_descent(EnergyEvaluator &ev, Vec theta0, const LineSearch &ls,
                           int max_iter, double tol) {
  VQEResult r = gradient_descent([&](const Vec &t) { return ev.energy(t); },
                                 [&](const Vec &t) { return ev.gradient(t); },
                                 std::move(theta0), ls, max_iter, tol);
  r.evaluations = ev.evaluations();
  r.state = ev.state(r.parameters);
  return r;
}

VQEResult minimize_exact(EnergyEvaluator &ev, Vec theta0, int max_iter, double gtol) {
  VQEResult r = bfgs([&](const Vec &t) { return ev.energy(t); },
                     [&](const Vec &t) { return ev.gradient(t); }, std::move(theta0),
                     max_iter, gtol);
  r.evaluations = ev.evaluations();
  r.state = ev.state(r.parameters);
  return r;
}

}  // namespace iaoq
