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

#include "iaoq/fci.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "iaoq/error.hpp"

namespace iaoq {

namespace {

int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

void strings_with_bits(int n, int k, std::vector<std::uint64_t> &out) {
  out.clear();
  if (k < 0 || k > n) return;
  for (std::uint64_t s = 0; s < (1ull << n); ++s)
    if (popcount(s) == k) out.push_back(s);
}

using IndexMap = std::unordered_map<std::uint64_t, Eigen::Index>;

IndexMap index_map(const std::vector<std::uint64_t> &basis) {
  IndexMap m;
  m.reserve(basis.size() * 2);
  for (std::size_t i = 0; i < basis.size(); ++i)
    m.emplace(basis[i], static_cast<Eigen::Index>(i));
  return m;
}

// Within blocks of degenerate energies, rotate to eigenvectors of S^2.
void label_spins(FCIResult &res, const CMat &s2, double tol) {
  const Eigen::Index m = res.energies.size();
  res.s2.assign(static_cast<std::size_t>(m), 0.0);
  Eigen::Index i = 0;
  while (i < m) {
    Eigen::Index j = i + 1;
    while (j < m && res.energies(j) - res.energies(j - 1) < tol) ++j;
    const Eigen::Index k = j - i;
    CMat block = res.vectors.middleCols(i, k);
    CMat s2b = block.adjoint() * s2 * block;
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (s2b + s2b.adjoint()));
    res.vectors.middleCols(i, k) = block * es.eigenvectors();
    for (Eigen::Index t = 0; t < k; ++t)
      res.s2[static_cast<std::size_t>(i + t)] = es.eigenvalues()(t);
    i = j;
  }
}

// Sign-fix each eigenvector so its largest-magnitude component is real
// positive.
void fix_phases(CMat &v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index best = 0;
    v.col(c).cwiseAbs().maxCoeff(&best);
    cplx a = v(best, c);
    if (std::abs(a) > 0) v.col(c) *= std::conj(a) / std::abs(a);
  }
}

}  // namespace

Sector Sector::from_counts(int n_orb, int n_elec, int ms2) {
  if ((n_elec + ms2) % 2 != 0 || n_elec < 0)
    fail(ErrorKind::InvalidInput, "electron count and 2Sz have different parity");
  Sector s{n_orb, (n_elec + ms2) / 2, (n_elec - ms2) / 2};
  if (s.n_up < 0 || s.n_down < 0 || s.n_up > n_orb || s.n_down > n_orb)
    fail(ErrorKind::InvalidInput, "sector does not fit the orbital count");
  return s;
}

std::vector<std::uint64_t> Sector::basis() const {
  if (2 * n_orb > 62) fail(ErrorKind::InvalidInput, "register too large");
  std::vector<std::uint64_t> up, dn, out;
  strings_with_bits(n_orb, n_up, up);
  strings_with_bits(n_orb, n_down, dn);
  out.reserve(up.size() * dn.size());
  for (auto d : dn)
    for (auto u : up) out.push_back(u | (d << n_orb));
  std::sort(out.begin(), out.end());
  return out;
}

CVec FCIResult::state(int k) const {
  if (n_qubits > 26) fail(ErrorKind::InvalidInput, "register too large to embed");
  CVec v = CVec::Zero(Eigen::Index(1) << n_qubits);
  for (std::size_t i = 0; i < basis.size(); ++i)
    v(static_cast<Eigen::Index>(basis[i])) = vectors(static_cast<Eigen::Index>(i), k);
  return v;
}

int excite(std::uint64_t det, int p, int r, std::uint64_t &out) {
  const std::uint64_t br = 1ull << r, bp = 1ull << p;
  if (!(det & br)) return 0;
  if (p == r) {
    out = det;
    return 1;
  }
  std::uint64_t d1 = det ^ br;
  if (d1 & bp) return 0;
  int n = popcount(det & (br - 1)) + popcount(d1 & (bp - 1));
  out = d1 | bp;
  return (n & 1) ? -1 : 1;
}

Mat determinant_hamiltonian(const MOIntegrals &mo, const Sector &sector) {
  mo.validate();
  if (sector.n_orb != mo.n_orb)
    fail(ErrorKind::InvalidInput, "sector orbital count does not match integrals");
  const int n = mo.n_orb;
  const auto basis = sector.basis();
  const auto index = index_map(basis);
  const auto dim = static_cast<Eigen::Index>(basis.size());

  // H = E0 + sum k_pr E_pr + 1/2 sum (pr|qs) E_pr E_qs,
  // k_pr = h_pr - 1/2 sum_q (pq|qr).
  Mat k = mo.h;
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r)
      for (int q = 0; q < n; ++q) k(p, r) -= 0.5 * mo.eri(p, q, q, r);

  Mat hm = Mat::Zero(dim, dim);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::uint64_t det = basis[static_cast<std::size_t>(j)];
    hm(j, j) += mo.e0;
    for (int s1 = 0; s1 < 2; ++s1) {
      const int o1 = s1 * n;
      for (int r = 0; r < n; ++r)
        for (int p = 0; p < n; ++p) {
          std::uint64_t d1;
          int g1 = excite(det, o1 + p, o1 + r, d1);
          if (!g1) continue;
          Eigen::Index i1 = index.at(d1);
          if (k(p, r) != 0.0) hm(i1, j) += g1 * k(p, r);
          for (int s2 = 0; s2 < 2; ++s2) {
            const int o2 = s2 * n;
            for (int t = 0; t < n; ++t)
              for (int q = 0; q < n; ++q) {
                std::uint64_t d2;
                int g2 = excite(d1, o2 + q, o2 + t, d2);
                if (!g2) continue;
                double v = mo.eri(q, t, p, r);
                if (v == 0.0) continue;
                hm(index.at(d2), j) += 0.5 * g1 * g2 * v;
              }
          }
        }
    }
  }
  return hm;
}

Mat determinant_s_squared(const Sector &sector) {
  const int n = sector.n_orb;
  const auto basis = sector.basis();
  const auto index = index_map(basis);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const double sz = 0.5 * (sector.n_up - sector.n_down);
  Mat s2 = Mat::Identity(dim, dim) * (sz * sz + sz);
  // S- S+ = sum_pq a+_{p,dn} a_{p,up} a+_{q,up} a_{q,dn}
  for (Eigen::Index j = 0; j < dim; ++j) {
    const std::uint64_t det = basis[static_cast<std::size_t>(j)];
    for (int q = 0; q < n; ++q) {
      std::uint64_t d1;
      int g1 = excite(det, q, n + q, d1);
      if (!g1) continue;
      for (int p = 0; p < n; ++p) {
        std::uint64_t d2;
        int g2 = excite(d1, n + p, p, d2);
        if (!g2) continue;
        s2(index.at(d2), j) += g1 * g2;
      }
    }
  }
  return s2;
}

FCIResult fci(const MOIntegrals &mo, int n_elec, int ms2) {
  Sector sector = Sector::from_counts(mo.n_orb, n_elec, ms2);
  if (2 * mo.n_orb > 62) fail(ErrorKind::InvalidInput, "too many orbitals");
  const auto basis = sector.basis();
  if (basis.size() > 20000) {
    std::ostringstream msg;
    msg << "determinant space too large for a dense solve: " << basis.size();
    fail(ErrorKind::InvalidInput, msg.str());
  }
  Mat hm = determinant_hamiltonian(mo, sector);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (hm + hm.transpose()));
  if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "FCI eigensolver failed");
  FCIResult res;
  res.energies = es.eigenvalues();
  res.vectors = es.eigenvectors().cast<cplx>();
  res.basis = basis;
  res.n_qubits = 2 * mo.n_orb;
  label_spins(res, determinant_s_squared(sector).cast<cplx>(), 1e-8);
  fix_phases(res.vectors);
  return res;
}

FCIResult fci(const PauliSum &h, const FciOptions &opt) {
  if (!h.is_hermitian(1e-10))
    fail(ErrorKind::InvalidInput, "Hamiltonian is not Hermitian");
  const int nq = h.n_qubits();
  std::vector<std::uint64_t> basis;
  if (opt.sector) {
    if (2 * opt.sector->n_orb != nq)
      fail(ErrorKind::InvalidInput, "sector does not match the register");
    basis = opt.sector->basis();
  } else {
    if (nq > 14) fail(ErrorKind::InvalidInput, "qubit budget exceeded");
    for (std::uint64_t i = 0; i < (1ull << nq); ++i) basis.push_back(i);
  }
  if (basis.size() > 20000) fail(ErrorKind::InvalidInput, "sector too large for a dense solve");
  const auto index = index_map(basis);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  auto project = [&](const PauliSum &op) {
    CMat m = CMat::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const std::uint64_t b = basis[static_cast<std::size_t>(j)];
      for (const auto &[p, c] : op.terms()) {
        auto it = index.find(b ^ p.x);
        if (it == index.end()) continue;
        m(it->second, j) += c * apply_phase(p, b);
      }
    }
    return m;
  };
  CMat hm = project(h);
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (hm + hm.adjoint()));
  if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "FCI eigensolver failed");
  FCIResult res;
  res.energies = es.eigenvalues();
  res.vectors = es.eigenvectors();
  res.basis = basis;
  res.n_qubits = nq;
  if (opt.s2_operator) label_spins(res, project(*opt.s2_operator), opt.degeneracy_tol);
  fix_phases(res.vectors);
  return res;
}

}  // namespace iaoq
