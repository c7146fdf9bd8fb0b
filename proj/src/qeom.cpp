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

#include "iaoq/qeom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "iaoq/encoding.hpp"
#include "iaoq/error.hpp"

namespace iaoq {

namespace {

PauliSum op(int q, int n_orb, bool create) {
  const Spin s = q < n_orb ? Spin::Up : Spin::Down;
  return create ? jw_creation(q % n_orb, s, n_orb) : jw_annihilation(q % n_orb, s, n_orb);
}

void check_indices(const std::vector<int> &occ, const std::vector<int> &vir, int n_orb) {
  std::set<int> seen;
  for (const auto *list : {&occ, &vir})
    for (int p : *list) {
      if (p < 0 || p >= n_orb) fail(ErrorKind::InvalidInput, "qeom: orbital index out of range");
      if (!seen.insert(p).second) fail(ErrorKind::InvalidInput, "qeom: occupied and virtual overlap");
    }
}

PauliSum commutator_of(const PauliSum &a, const PauliSum &b) {
  return (a * b - b * a).simplified(1e-14);
}

}  // namespace

ExcitationBasis ExcitationBasis::spin_summed(const std::vector<int> &occ,
                                             const std::vector<int> &vir, int n_orb) {
  check_indices(occ, vir, n_orb);
  ExcitationBasis b;
  for (int i : occ)
    for (int a : vir) {
      PauliSum e = jw_excitation(a, i, Spin::Up, n_orb) + jw_excitation(a, i, Spin::Down, n_orb);
      b.ops.push_back(e.simplified(1e-14));
      b.labels.push_back("S" + std::to_string(i) + "->" + std::to_string(a));
    }
  for (std::size_t ii = 0; ii < occ.size(); ++ii)
    for (std::size_t jj = ii; jj < occ.size(); ++jj)
      for (std::size_t aa = 0; aa < vir.size(); ++aa)
        for (std::size_t bb = aa; bb < vir.size(); ++bb) {
          const int i = occ[ii], j = occ[jj], a = vir[aa], c = vir[bb];
          PauliSum e(2 * n_orb);
          for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t)
              e += op(a + s * n_orb, n_orb, true) * op(c + t * n_orb, n_orb, true) *
                   op(j + t * n_orb, n_orb, false) * op(i + s * n_orb, n_orb, false);
          e = e.simplified(1e-14);
          if (e.terms().empty()) continue;
          b.ops.push_back(e);
          b.labels.push_back("D" + std::to_string(i) + std::to_string(j) + "->" +
                             std::to_string(a) + std::to_string(c));
        }
  return b;
}

ExcitationBasis ExcitationBasis::spin_resolved(const std::vector<int> &occ,
                                               const std::vector<int> &vir, int n_orb) {
  check_indices(occ, vir, n_orb);
  ExcitationBasis b;
  for (int s = 0; s < 2; ++s)
    for (int i : occ)
      for (int a : vir) {
        b.ops.push_back(jw_excitation(a, i, s ? Spin::Down : Spin::Up, n_orb).simplified(1e-14));
        b.labels.push_back(std::string(s ? "Sd" : "Su") + std::to_string(i) + "->" +
                           std::to_string(a));
      }
  for (int i : occ)
    for (int j : occ)
      for (int a : vir)
        for (int c : vir) {
          PauliSum e = op(a, n_orb, true) * op(c + n_orb, n_orb, true) *
                       op(j + n_orb, n_orb, false) * op(i, n_orb, false);
          b.ops.push_back(e.simplified(1e-14));
          b.labels.push_back("D" + std::to_string(i) + std::to_string(j) + "->" +
                             std::to_string(a) + std::to_string(c));
        }
  return b;
}

ExcitationBasis ExcitationBasis::encode_two_orbital() const {
  ExcitationBasis out;
  out.labels = labels;
  for (const auto &e : ops) out.ops.push_back(TwoOrbitalEncoding::encode_operator(e));
  return out;
}

CMat QeomMatrices::hamiltonian_block() const {
  const Eigen::Index k = m.rows();
  CMat out(2 * k, 2 * k);
  out << m, q, q.conjugate(), m.conjugate();
  return out;
}

CMat QeomMatrices::metric_block() const {
  const Eigen::Index k = v.rows();
  CMat out(2 * k, 2 * k);
  out << v, w, -w.conjugate(), -v.conjugate();
  return out;
}

PauliSum triple_commutator(const PauliSum &a, const PauliSum &b, const PauliSum &c) {
  return ((commutator_of(commutator_of(a, b), c) + commutator_of(a, commutator_of(b, c))) * 0.5)
      .simplified(1e-14);
}

QeomMatrices build_matrices(const QuantumState &state, const ExcitationBasis &basis,
                            const PauliSum &h, const SamplingOptions &opt) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (k == 0) fail(ErrorKind::InvalidInput, "qeom: empty excitation basis");
  for (const auto &e : basis.ops)
    if (e.n_qubits() != h.n_qubits()) fail(ErrorKind::InvalidInput, "qeom: basis and Hamiltonian widths differ");

  std::vector<PauliSum> vop, mop, wop, qop;
  std::set<PauliString> strings;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const PauliSum ed = basis.ops[static_cast<std::size_t>(i)].adjoint();
      const PauliSum &en = basis.ops[static_cast<std::size_t>(j)];
      const PauliSum end = en.adjoint();
      vop.push_back(commutator_of(ed, en));
      mop.push_back(triple_commutator(ed, h, en));
      wop.push_back(commutator_of(ed, end) * -1.0);
      qop.push_back(triple_commutator(ed, h, end) * -1.0);
      for (const auto *o : {&vop.back(), &mop.back(), &wop.back(), &qop.back()})
        for (const auto &[p, c] : o->terms()) strings.insert(p);
    }
  const std::vector<PauliString> list(strings.begin(), strings.end());
  const std::vector<double> vals = estimate_paulis(state, list, opt);
  std::map<PauliString, double> value;
  for (std::size_t i = 0; i < list.size(); ++i) value[list[i]] = vals[i];
  auto ev = [&](const PauliSum &o) {
    cplx acc = 0.0;
    for (const auto &[p, c] : o.terms()) acc += c * value.at(p);
    return acc;
  };
  QeomMatrices qm;
  qm.m = qm.q = qm.v = qm.w = CMat::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto idx = static_cast<std::size_t>(i * k + j);
      qm.v(i, j) = ev(vop[idx]);
      qm.m(i, j) = ev(mop[idx]);
      qm.w(i, j) = ev(wop[idx]);
      qm.q(i, j) = ev(qop[idx]);
    }
  return qm;
}

double metric_determinant(const QeomMatrices &qm) {
  return qm.metric_block().determinant().real();
}

QeomSolution solve(const QeomMatrices &qm, double max_condition) {
  const CMat g = qm.metric_block();
  const CMat hb = qm.hamiltonian_block();
  const CMat gh = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(gh);
  const Vec s = es.eigenvalues();
  const double smax = s.cwiseAbs().maxCoeff(), smin = s.cwiseAbs().minCoeff();
  QeomSolution out;
  out.metric_condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  out.metric_determinant = metric_determinant(qm);
  if (!(out.metric_condition <= max_condition)) {
    std::ostringstream os;
    os << "qeom: ill-conditioned metric (condition " << out.metric_condition << ", det(G) "
       << out.metric_determinant << ")";
    fail(ErrorKind::Numerical, os.str());
  }
  // Whitening: T = U |s|^{-1/2}; sign(s) T^dag H T y = e y.
  const Eigen::Index n = s.size();
  CMat t = es.eigenvectors();
  Vec sign(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.col(i) /= std::sqrt(std::abs(s(i)));
    sign(i) = s(i) > 0 ? 1.0 : -1.0;
  }
  const CMat red = sign.cast<cplx>().asDiagonal() * (t.adjoint() * hb * t);
  Eigen::ComplexEigenSolver<CMat> ces(red);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CVec y = ces.eigenvectors().col(i);
    double norm = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) norm += sign(j) * std::norm(y(j));
    if (norm <= 0) continue;
    const cplx e = ces.eigenvalues()(i);
    out.max_imag = std::max(out.max_imag, std::abs(e.imag()));
    out.energies.push_back(e.real());
  }
  std::sort(out.energies.begin(), out.energies.end());
  return out;
}

}  // namespace iaoq
