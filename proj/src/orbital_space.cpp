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

#include "iaoq/orbital_space.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "iaoq/error.hpp"

namespace iaoq {

namespace {

void check_orthonormal(const Mat &c, const Mat &metric) {
  if (c.rows() != metric.rows())
    fail(ErrorKind::InvalidInput, "orbital coefficients do not match the basis size");
  Mat g = c.transpose() * metric * c;
  double dev = (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    std::ostringstream msg;
    msg << "orbital coefficients not orthonormal (max deviation " << dev << ")";
    fail(ErrorKind::InvalidInput, msg.str());
  }
}

Mat unpack_symmetric(const double *packed, std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      m(i, j) = m(j, i) = packed[PackedEri::pair(i, j)];
  return m;
}

void pack_symmetric(const Mat &m, double *packed) {
  const auto n = static_cast<std::size_t>(m.rows());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) packed[PackedEri::pair(i, j)] = m(i, j);
}

// Integrals restricted to a subset of orbitals.
MOIntegrals restrict(const MOIntegrals &mo, const std::vector<int> &keep,
                     int n_elec) {
  const int m = static_cast<int>(keep.size());
  MOIntegrals out;
  out.e0 = mo.e0;
  out.n_orb = m;
  out.n_elec = n_elec;
  out.restricted = mo.restricted;
  out.h.resize(m, m);
  out.eri = PackedEri(static_cast<std::size_t>(m));
  for (int p = 0; p < m; ++p)
    for (int r = 0; r < m; ++r) out.h(p, r) = mo.h(keep[p], keep[r]);
  for (int p = 0; p < m; ++p)
    for (int r = 0; r <= p; ++r)
      for (int q = 0; q < m; ++q)
        for (int s = 0; s <= q; ++s)
          out.eri.at(p, r, q, s) = mo.eri(keep[p], keep[r], keep[q], keep[s]);
  return out;
}

}  // namespace

PackedEri transform_eri(const PackedEri &eri, const Mat &c) {
  const auto n = eri.n();
  const auto m = static_cast<std::size_t>(c.cols());
  if (static_cast<std::size_t>(c.rows()) != n)
    fail(ErrorKind::InvalidInput, "coefficient rows do not match the integral basis");
  const std::size_t np_ao = n * (n + 1) / 2;
  const std::size_t np_mo = m * (m + 1) / 2;

  // Ket half-transform: X[(mu nu), (q s)].
  Mat x(np_ao, np_mo);
  const Mat ct = c.transpose();
#pragma omp parallel
  {
    std::vector<double> row(np_ao);
    std::vector<double> out(np_mo);
#pragma omp for schedule(static)
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(np_ao); ++a) {
      for (std::size_t b = 0; b < np_ao; ++b)
        row[b] = eri.pair_element(static_cast<std::size_t>(a), b);
      Mat t = ct * unpack_symmetric(row.data(), n) * c;
      pack_symmetric(t, out.data());
      for (std::size_t b = 0; b < np_mo; ++b) x(a, static_cast<Eigen::Index>(b)) = out[b];
    }
  }

  // Bra half-transform on each column.
  Mat y(np_mo, np_mo);
#pragma omp parallel
  {
    std::vector<double> col(np_ao);
    std::vector<double> out(np_mo);
#pragma omp for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(np_mo); ++b) {
      for (std::size_t a = 0; a < np_ao; ++a) col[a] = x(static_cast<Eigen::Index>(a), b);
      Mat t = ct * unpack_symmetric(col.data(), n) * c;
      pack_symmetric(t, out.data());
      for (std::size_t a = 0; a < np_mo; ++a) y(static_cast<Eigen::Index>(a), b) = out[a];
    }
  }
  return PackedEri::from_pair_matrix(y);
}

PackedEri transform_eri_reference(const PackedEri &eri, const Mat &c) {
  const auto n = eri.n();
  const auto m = static_cast<std::size_t>(c.cols());
  std::vector<double> a = eri.to_dense();
  // Four quarter transformations, one index at a time.
  std::vector<double> b(m * n * n * n, 0.0);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t i = 0; i < n; ++i) {
      double cip = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p));
      for (std::size_t rest = 0; rest < n * n * n; ++rest)
        b[p * n * n * n + rest] += cip * a[i * n * n * n + rest];
    }
  std::vector<double> d(m * m * n * n, 0.0);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t j = 0; j < n; ++j) {
        double cjr = c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(r));
        for (std::size_t rest = 0; rest < n * n; ++rest)
          d[(p * m + r) * n * n + rest] += cjr * b[(p * n + j) * n * n + rest];
      }
  std::vector<double> e(m * m * m * n, 0.0);
  for (std::size_t pr = 0; pr < m * m; ++pr)
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t k = 0; k < n; ++k) {
        double ckq = c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(q));
        for (std::size_t l = 0; l < n; ++l)
          e[(pr * m + q) * n + l] += ckq * d[(pr * n + k) * n + l];
      }
  std::vector<double> f(m * m * m * m, 0.0);
  for (std::size_t prq = 0; prq < m * m * m; ++prq)
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t l = 0; l < n; ++l)
        f[prq * m + s] +=
            c(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(s)) * e[prq * n + l];
  PackedEri out(m);
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t r = 0; r <= p; ++r)
      for (std::size_t q = 0; q < m; ++q)
        for (std::size_t s = 0; s <= q; ++s)
          if (PackedEri::pair(p, r) >= PackedEri::pair(q, s))
            out.at(p, r, q, s) = f[((p * m + r) * m + q) * m + s];
  return out;
}

MOIntegrals ao2mo(const Mat &hcore, const PackedEri &eri, const Mat &coeff,
                  const Mat &metric, double e0) {
  check_orthonormal(coeff, metric);
  MOIntegrals mo;
  mo.e0 = e0;
  mo.n_orb = static_cast<int>(coeff.cols());
  Mat h = coeff.transpose() * hcore * coeff;
  mo.h = 0.5 * (h + h.transpose());
  mo.eri = transform_eri(eri, coeff);
  return mo;
}

MOIntegrals ao2mo(const IntegralBundle &bundle, const Mat &coeff) {
  MOIntegrals mo = ao2mo(bundle.hcore, bundle.eri, coeff, bundle.s1, bundle.e_nuc);
  mo.n_elec = 2 * bundle.n_occ;
  return mo;
}

MOIntegrals rotate(const MOIntegrals &mo, const Mat &u) {
  MOIntegrals out =
      ao2mo(mo.h, mo.eri, u, Mat::Identity(mo.n_orb, mo.n_orb), mo.e0);
  out.n_elec = mo.n_elec;
  out.restricted = mo.restricted;
  return out;
}

MOIntegrals freeze_core(const MOIntegrals &mo, const std::vector<int> &core) {
  mo.validate();
  std::set<int> cs;
  for (int i : core) {
    if (i < 0 || i >= mo.n_orb) fail(ErrorKind::InvalidInput, "core index out of range");
    if (!cs.insert(i).second) fail(ErrorKind::InvalidInput, "duplicate core index");
  }
  if (2 * static_cast<int>(cs.size()) > mo.n_elec)
    fail(ErrorKind::InvalidInput, "more core electrons than electrons");
  std::vector<int> active;
  for (int p = 0; p < mo.n_orb; ++p)
    if (!cs.count(p)) active.push_back(p);

  double e0 = mo.e0;
  for (int i : cs) {
    e0 += 2.0 * mo.h(i, i);
    for (int j : cs) e0 += 2.0 * mo.eri(i, i, j, j) - mo.eri(i, j, j, i);
  }
  Mat h = mo.h;
  for (int p = 0; p < mo.n_orb; ++p)
    for (int q = 0; q < mo.n_orb; ++q)
      for (int i : cs) h(p, q) += 2.0 * mo.eri(p, q, i, i) - mo.eri(p, i, i, q);
  MOIntegrals shifted = mo;
  shifted.h = h;
  MOIntegrals out =
      restrict(shifted, active, mo.n_elec - 2 * static_cast<int>(cs.size()));
  out.e0 = e0;
  return out;
}

double rhf_energy(const MOIntegrals &mo, int n_occ) {
  if (2 * n_occ != mo.n_elec)
    fail(ErrorKind::InvalidInput, "rhf_energy: 2*n_occ must equal n_elec");
  double e = mo.e0;
  for (int i = 0; i < n_occ; ++i) {
    e += 2.0 * mo.h(i, i);
    for (int j = 0; j < n_occ; ++j) e += 2.0 * mo.eri(i, i, j, j) - mo.eri(i, j, j, i);
  }
  return e;
}

Mat fock_matrix(const MOIntegrals &mo, int n_occ) {
  Mat f = mo.h;
  for (int p = 0; p < mo.n_orb; ++p)
    for (int q = 0; q < mo.n_orb; ++q)
      for (int i = 0; i < n_occ; ++i)
        f(p, q) += 2.0 * mo.eri(p, q, i, i) - mo.eri(p, i, i, q);
  return 0.5 * (f + f.transpose());
}

MP2Result mp2(const MOIntegrals &mo, int n_occ) {
  mo.validate();
  if (2 * n_occ != mo.n_elec)
    fail(ErrorKind::InvalidInput, "mp2: 2*n_occ must equal n_elec");
  const int n = mo.n_orb;
  const int nv = n - n_occ;
  Mat f = fock_matrix(mo, n_occ);
  // Semicanonical orbitals: diagonalize the occupied and virtual blocks.
  Mat r = Mat::Zero(n, n);
  Vec eps(n);
  if (n_occ > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> eo(f.topLeftCorner(n_occ, n_occ));
    r.topLeftCorner(n_occ, n_occ) = eo.eigenvectors();
    eps.head(n_occ) = eo.eigenvalues();
  }
  if (nv > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> ev(f.bottomRightCorner(nv, nv));
    r.bottomRightCorner(nv, nv) = ev.eigenvectors();
    eps.tail(nv) = ev.eigenvalues();
  }
  MOIntegrals sc = rotate(mo, r);

  const auto t_index = [&](int i, int j, int a, int b) {
    return ((static_cast<std::size_t>(i) * n_occ + j) * nv + a) * nv + b;
  };
  std::vector<double> t(static_cast<std::size_t>(n_occ) * n_occ * nv * nv);
  MP2Result res;
  for (int i = 0; i < n_occ; ++i)
    for (int j = 0; j < n_occ; ++j)
      for (int a = 0; a < nv; ++a)
        for (int b = 0; b < nv; ++b) {
          double denom = eps(i) + eps(j) - eps(n_occ + a) - eps(n_occ + b);
          if (std::abs(denom) < 1e-12)
            fail(ErrorKind::Numerical, "mp2: zero orbital-energy denominator");
          double iajb = sc.eri(i, n_occ + a, j, n_occ + b);
          double ibja = sc.eri(i, n_occ + b, j, n_occ + a);
          double tv = iajb / denom;
          t[t_index(i, j, a, b)] = tv;
          res.corr_energy += tv * (2.0 * iajb - ibja);
        }

  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n_occ; ++i) d(i, i) = 2.0;
  for (int i = 0; i < n_occ; ++i)
    for (int j = 0; j < n_occ; ++j) {
      double s = 0.0;
      for (int k = 0; k < n_occ; ++k)
        for (int a = 0; a < nv; ++a)
          for (int b = 0; b < nv; ++b)
            s += t[t_index(i, k, a, b)] *
                 (2.0 * t[t_index(j, k, a, b)] - t[t_index(j, k, b, a)]);
      d(i, j) -= 2.0 * s;
    }
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b) {
      double s = 0.0;
      for (int i = 0; i < n_occ; ++i)
        for (int j = 0; j < n_occ; ++j)
          for (int c = 0; c < nv; ++c)
            s += t[t_index(i, j, a, c)] *
                 (2.0 * t[t_index(i, j, b, c)] - t[t_index(i, j, c, b)]);
      d(n_occ + a, n_occ + b) = 2.0 * s;
    }
  Mat dd = r * d * r.transpose();
  res.rdm1 = 0.5 * (dd + dd.transpose());
  return res;
}

NaturalOrbitals natural_orbitals(const Mat &rdm1) {
  if (rdm1.rows() != rdm1.cols())
    fail(ErrorKind::InvalidInput, "density matrix is not square");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rdm1 + rdm1.transpose()));
  const Eigen::Index n = rdm1.rows();
  Mat v = es.eigenvectors();
  std::vector<Eigen::Index> lead(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index best = 0;
    v.col(k).cwiseAbs().maxCoeff(&best);
    if (v(best, k) < 0) v.col(k) *= -1.0;
    lead[static_cast<std::size_t>(k)] = best;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const Vec &w = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(w(a) - w(b)) > 1e-10) return w(a) > w(b);
    return lead[static_cast<std::size_t>(a)] < lead[static_cast<std::size_t>(b)];
  });
  NaturalOrbitals out;
  out.occupations.resize(n);
  out.rotation.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.occupations(k) = w(order[static_cast<std::size_t>(k)]);
    out.rotation.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

Selector Selector::parse(const std::string &s) {
  Selector sel;
  if (s == "full") {
    sel.kind = SelectorKind::Full;
  } else if (s == "hono-luno") {
    sel.kind = SelectorKind::HonoLuno;
  } else if (s.rfind("hf-window(", 0) == 0 && s.back() == ')') {
    sel.kind = SelectorKind::HfWindow;
    try {
      sel.window = std::stoi(s.substr(10, s.size() - 11));
    } catch (const std::exception &) {
      fail(ErrorKind::Config, "selector: malformed hf-window size in " + s);
    }
  } else {
    fail(ErrorKind::Config, "selector: expected full, hono-luno or hf-window(k), got " + s);
  }
  return sel;
}

std::pair<MOIntegrals, ActiveSpace> make_active_space(const MOIntegrals &mo,
                                                      const Selector &selector,
                                                      int n_active_elec) {
  mo.validate();
  const int n = mo.n_orb;
  const int n_occ = mo.n_elec / 2;
  ActiveSpace as;
  switch (selector.kind) {
    case SelectorKind::Full: {
      if (n_active_elec != mo.n_elec)
        fail(ErrorKind::InvalidInput, "full selector keeps every electron");
      as.coeff = Mat::Identity(n, n);
      as.label = "full";
      return {mo, as};
    }
    case SelectorKind::HonoLuno: {
      if (n_active_elec != 2)
        fail(ErrorKind::InvalidInput, "hono-luno active space holds 2 electrons");
      if (n_occ < 1 || n_occ >= n)
        fail(ErrorKind::InvalidInput, "hono-luno needs an occupied and a virtual orbital");
      MP2Result m = mp2(mo, n_occ);
      NaturalOrbitals no = natural_orbitals(m.rdm1);
      MOIntegrals rot = rotate(mo, no.rotation);
      std::vector<int> core(static_cast<std::size_t>(n_occ - 1));
      std::iota(core.begin(), core.end(), 0);
      MOIntegrals folded = freeze_core(rot, core);
      MOIntegrals act = restrict(folded, {0, 1}, 2);
      act.e0 = folded.e0;
      as.coeff = no.rotation.middleCols(n_occ - 1, 2);
      as.frozen = core;
      as.label = "hono-luno";
      return {act, as};
    }
    case SelectorKind::HfWindow: {
      const int k = selector.window;
      const int act_occ = n_active_elec / 2;
      if (n_active_elec % 2 != 0 || act_occ > n_occ || k < act_occ ||
          n_occ - act_occ + k > n || k <= 0)
        fail(ErrorKind::InvalidInput, "requested window larger than orbital count");
      std::vector<int> core(static_cast<std::size_t>(n_occ - act_occ));
      std::iota(core.begin(), core.end(), 0);
      MOIntegrals folded = freeze_core(mo, core);
      std::vector<int> keep(static_cast<std::size_t>(k));
      std::iota(keep.begin(), keep.end(), 0);
      MOIntegrals act = restrict(folded, keep, n_active_elec);
      act.e0 = folded.e0;
      as.coeff = Mat::Identity(n, n).middleCols(n_occ - act_occ, k);
      as.frozen = core;
      as.label = "hf-window";
      return {act, as};
    }
  }
  fail(ErrorKind::InvalidInput, "unknown selector");
}

}  // namespace iaoq
