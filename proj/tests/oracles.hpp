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

#pragma once

// Independent reference constructions shared by the unit tests and the
// acceptance driver. Nothing here goes through the Pauli algebra.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "iaoq/integrals.hpp"
#include "iaoq/types.hpp"
#include "iaoq/vqse.hpp"

namespace iaoq::testing {

inline std::filesystem::path fixture(const std::string &rel) {
  return std::filesystem::path(IAOQ_FIXTURES) / rel;
}

inline CMat random_unitary(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  CMat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<CMat> qr(a);
  return qr.householderQ();
}

inline Mat random_orthogonal(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ();
}

inline CVec random_state(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
  return v.normalized();
}

// Random real MOIntegrals with the 8-fold symmetry of a real basis.
inline MOIntegrals random_integrals(int n, int n_elec, std::mt19937_64 &rng, double scale = 0.3) {
  std::normal_distribution<double> g;
  MOIntegrals mo;
  mo.n_orb = n;
  mo.n_elec = n_elec;
  mo.e0 = g(rng);
  Mat h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = g(rng);
  mo.h = h;
  // Positive semidefinite pair matrix keeps the two-body part physical.
  const int np = n * (n + 1) / 2;
  Mat b(np, np);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) b(i, j) = scale * g(rng);
  mo.eri = PackedEri::from_pair_matrix(b * b.transpose() / np);
  return mo;
}

/**
 * Dense fermion operators built directly from occupation bit strings:
 * spin orbital j is bit j and a^dag_j carries the sign (-1)^(occupied
 * orbitals below j). Independent of the Pauli-algebra code.
 */
inline CMat dense_creation(int j, int n_modes) {
  const Eigen::Index dim = Eigen::Index(1) << n_modes;
  CMat m = CMat::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    if ((s >> j) & 1) continue;
    const int below = __builtin_popcountll(static_cast<std::uint64_t>(s) & ((1ull << j) - 1));
    m(s | (Eigen::Index(1) << j), s) = below % 2 ? -1.0 : 1.0;
  }
  return m;
}

// Dense second-quantized Hamiltonian for a restricted MOIntegrals, up
// orbital p as mode p and down orbital p as mode n + p.
inline CMat dense_hamiltonian(const MOIntegrals &mo) {
  const int n = mo.n_orb, m = 2 * n;
  std::vector<CMat> c(static_cast<std::size_t>(m)), a(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    c[static_cast<std::size_t>(j)] = dense_creation(j, m);
    a[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)].adjoint();
  }
  const Eigen::Index dim = Eigen::Index(1) << m;
  CMat h = mo.e0 * CMat::Identity(dim, dim);
  auto mode = [n](int p, int s) { return static_cast<std::size_t>(p + s * n); };
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (mo.h(p, q) != 0.0) h += mo.h(p, q) * c[mode(p, s)] * a[mode(q, s)];
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r)
          for (int q = 0; q < n; ++q)
            for (int u = 0; u < n; ++u) {
              const double v = mo.eri(static_cast<std::size_t>(p), static_cast<std::size_t>(r),
                                      static_cast<std::size_t>(q), static_cast<std::size_t>(u));
              if (v == 0.0) continue;
              h += 0.5 * v * c[mode(p, s)] * c[mode(q, t)] * a[mode(u, t)] * a[mode(r, s)];
            }
  return h;
}


// Fermion operators applied to state vectors for n spatial orbitals, up p
// -> mode p, down p -> mode n + p, with the sign (-1)^(occupied modes below).
struct Fock {
  int n;

  CVec create(int j, const CVec &v) const { return apply(j, v, true); }
  CVec annihilate(int j, const CVec &v) const { return apply(j, v, false); }

  CVec apply(int j, const CVec &v, bool up) const {
    CVec out = CVec::Zero(v.size());
    const auto bit = std::uint64_t{1} << j;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const auto s = static_cast<std::uint64_t>(i);
      if (v(i) == 0.0 || ((s & bit) != 0) == up) continue;
      const double sign = __builtin_popcountll(s & (bit - 1)) % 2 ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(s ^ bit)) += sign * v(i);
    }
    return out;
  }
  int mode(int p, int s) const { return p + s * n; }

  CVec single(int p, int r, const CVec &v) const {
    CVec out = CVec::Zero(v.size());
    for (int x = 0; x < 2; ++x) out += create(mode(p, x), annihilate(mode(r, x), v));
    return out;
  }
  CVec pair(int p, int r, int q, int s, const CVec &v) const {
    CVec out = CVec::Zero(v.size());
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        out += create(mode(p, x), create(mode(q, y), annihilate(mode(s, y), annihilate(mode(r, x), v))));
    return out;
  }
  CVec hamiltonian(const MOIntegrals &mo, const CVec &v) const {
    CVec out = mo.e0 * v;
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) {
        if (mo.h(p, r) != 0.0) out += mo.h(p, r) * single(p, r, v);
        for (int q = 0; q < n; ++q)
          for (int s = 0; s < n; ++s) {
            const double e = mo.eri(static_cast<std::size_t>(p), static_cast<std::size_t>(r),
                                    static_cast<std::size_t>(q), static_cast<std::size_t>(s));
            if (e != 0.0) out += 0.5 * e * pair(p, r, q, s, v);
          }
      }
    return out;
  }
  CVec vacuum() const {
    CVec v = CVec::Zero(Eigen::Index(1) << (2 * n));
    v(0) = 1.0;
    return v;
  }
};

// Real singlet sum_pq C_pq a+_p,up a+_q,dn |0> over the first na orbitals.
inline CVec random_singlet(const Fock &f, int na, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Mat c(na, na);
  for (int p = 0; p < na; ++p)
    for (int q = 0; q <= p; ++q) c(p, q) = c(q, p) = g(rng);
  CVec psi = CVec::Zero(f.vacuum().size());
  for (int p = 0; p < na; ++p)
    for (int q = 0; q < na; ++q) psi += c(p, q) * f.create(f.mode(p, 0), f.create(f.mode(q, 1), f.vacuum()));
  return psi.normalized();
}

inline void spin_summed_rdms(const Fock &f, const CVec &psi, int na, Mat &rdm1, std::vector<double> &rdm2) {
  rdm1 = Mat::Zero(na, na);
  rdm2.assign(static_cast<std::size_t>(na * na * na * na), 0.0);
  for (int p = 0; p < na; ++p)
    for (int r = 0; r < na; ++r) {
      rdm1(p, r) = psi.dot(f.single(p, r, psi)).real();
      for (int q = 0; q < na; ++q)
        for (int s = 0; s < na; ++s)
          rdm2[static_cast<std::size_t>(((p * na + r) * na + q) * na + s)] = psi.dot(f.pair(p, r, q, s, psi)).real();
    }
}

inline CVec apply_op(const Fock &f, const VqseOperator &o, const CVec &v) {
  if (o.kind == 0) return v;
  if (o.kind == 1) return f.single(o.p, o.r, v);
  return f.pair(o.p, o.r, o.q, o.s, v);
}

inline VqseProblem vqse_problem(const MOIntegrals &mo, int na, const Mat &rdm1, const std::vector<double> &rdm2) {
  VqseProblem p;
  p.n_full = mo.n_orb;
  p.n_active = na;
  p.e0 = mo.e0;
  p.t = absorb_one_body(mo.h, mo.eri);
  p.rdm1 = rdm1;
  p.rdm2 = rdm2;
  return p;
}

}  // namespace iaoq::testing
