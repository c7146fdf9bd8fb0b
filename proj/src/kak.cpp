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

#include "iaoq/kak.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "iaoq/error.hpp"

namespace iaoq {

namespace {

constexpr double kPi = std::numbers::pi;

// Magic basis change: M = CNOT(0->1) H(q0) (S x S). Local gates map to real
// orthogonal matrices under M^dagger (.) M.
Eigen::Matrix4cd magic() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd m;
  m << r, I_ * r, 0, 0,
       0, 0, I_ * r, r,
       0, 0, I_ * r, -r,
       r, -I_ * r, 0, 0;
  return m;
}

Eigen::Matrix4cd special(const Eigen::Matrix4cd &u) {
  cplx d = u.determinant();
  return u * std::pow(d, -0.25);
}

void append_local(Circuit &c, const Eigen::Matrix4cd &local, double tol) {
  Eigen::Matrix2cd a, b;
  if (factor_local(local, a, b) > tol)
    fail(ErrorKind::Numerical, "kak: local factor is not a tensor product");
  auto ea = zyz_angles(a), eb = zyz_angles(b);
  c.u3(0, ea[0], ea[1], ea[2]);
  c.u3(1, eb[0], eb[1], eb[2]);
}

}  // namespace

std::array<double, 3> zyz_angles(const Eigen::Matrix2cd &u) {
  // Rz(p) Ry(t) Rz(l) = [[e^{-i(p+l)/2} c, -e^{-i(p-l)/2} s],
  //                      [e^{ i(p-l)/2} s,  e^{ i(p+l)/2} c]]
  Eigen::Matrix2cd v = u * std::pow(u.determinant(), -0.5);
  const double ca = std::abs(v(0, 0)), sb = std::abs(v(1, 0));
  const double t = 2.0 * std::atan2(sb, ca);
  double sum = 0.0, diff = 0.0;
  if (ca > 1e-12) sum = -2.0 * std::arg(v(0, 0));
  if (sb > 1e-12) diff = 2.0 * std::arg(v(1, 0));
  return {t, 0.5 * (sum + diff), 0.5 * (sum - diff)};
}

double factor_local(const Eigen::Matrix4cd &u, Eigen::Matrix2cd &a,
                    Eigen::Matrix2cd &b) {
  // u(i0 + 2 i1, j0 + 2 j1) = b(i1, j1) a(i0, j0) -> rank one rearrangement.
  Eigen::Matrix4cd r;
  for (int i0 = 0; i0 < 2; ++i0)
    for (int i1 = 0; i1 < 2; ++i1)
      for (int j0 = 0; j0 < 2; ++j0)
        for (int j1 = 0; j1 < 2; ++j1)
          r(2 * i1 + j1, 2 * i0 + j0) = u(i0 + 2 * i1, j0 + 2 * j1);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  Eigen::Vector4cd ub = svd.matrixU().col(0) * std::sqrt(s(0));
  Eigen::Vector4cd va = svd.matrixV().col(0).conjugate() * std::sqrt(s(0));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      b(i, j) = ub(2 * i + j);
      a(i, j) = va(2 * i + j);
    }
  return s(1);
}

double phase_fidelity(const Eigen::Matrix4cd &a, const Eigen::Matrix4cd &b) {
  return std::abs((a.adjoint() * b).trace()) / 4.0;
}

KakResult kak_compact(const Eigen::Matrix4cd &u, double tol) {
  if ((u.adjoint() * u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() > 1e-8)
    fail(ErrorKind::InvalidInput, "kak: matrix is not unitary");
  const Eigen::Matrix4cd m = magic();
  const Eigen::Matrix4cd us = special(u);
  KakResult out;

  Eigen::Matrix2cd a, b;
  if (factor_local(m * us * m.adjoint(), a, b) <= tol) {
    auto ea = zyz_angles(a), eb = zyz_angles(b);
    out.circuit.so4(0, 1, {ea[0], ea[1], ea[2], eb[0], eb[1], eb[2]});
  } else {
    out.general = true;
    // U_m = M^dagger U M = O1 D O2 with O1, O2 in SO(4) and D diagonal.
    const Eigen::Matrix4cd um = m.adjoint() * us * m;
    const Eigen::Matrix4cd sym = um.transpose() * um;
    // Real and imaginary parts commute; a random combination separates them.
    std::mt19937_64 rng(0x6b616bULL);
    std::uniform_real_distribution<double> uni(0.5, 1.5);
    Eigen::Matrix4d p;
    bool found = false;
    for (int attempt = 0; attempt < 16 && !found; ++attempt) {
      Eigen::Matrix4d mix = sym.real() + uni(rng) * sym.imag();
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (mix + mix.transpose()));
      p = es.eigenvectors();
      Eigen::Matrix4cd dd = p.transpose() * sym * p;
      found = (dd - Eigen::Matrix4cd(dd.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10;
    }
    if (!found) fail(ErrorKind::Numerical, "kak: could not diagonalize U^T U");
    if (p.determinant() < 0) p.col(0) *= -1.0;
    Eigen::Vector4cd d2 = (p.transpose() * sym * p).diagonal();
    Eigen::Vector4cd d;
    for (int k = 0; k < 4; ++k) d(k) = std::sqrt(d2(k));
    Eigen::Matrix4cd o1c = um * p.cast<cplx>() * d.cwiseInverse().asDiagonal();
    if (o1c.real().determinant() < 0) {
      d(0) = -d(0);
      o1c.col(0) *= -1.0;
    }
    if (o1c.imag().cwiseAbs().maxCoeff() > 1e-8)
      fail(ErrorKind::Numerical, "kak: left factor is not real");
    const Eigen::Matrix4d o1 = o1c.real();

    // D_k = exp(i(g + a xx_k + b yy_k + c zz_k)); xx, yy, zz are the diagonals
    // of XX, YY, ZZ in the magic basis.
    Eigen::Matrix4d coef;
    coef << 1, 1, -1, 1,
            1, -1, 1, 1,
            1, 1, 1, -1,
            1, -1, -1, -1;
    Eigen::Vector4d phi;
    for (int k = 0; k < 4; ++k) phi(k) = std::arg(d(k));
    Eigen::Vector4d sol = coef.fullPivLu().solve(phi);
    const double ca = sol(1), cb = sol(2), cc = sol(3);

    append_local(out.circuit, m * p.transpose().cast<cplx>() * m.adjoint(), tol);
    // exp(i(a XX + b YY + c ZZ)) up to phase.
    out.circuit.rz(0, -kPi / 2);
    out.circuit.cnot(0, 1);
    out.circuit.ry(0, 2 * ca - kPi / 2);
    out.circuit.rz(1, kPi / 2 - 2 * cc);
    out.circuit.cnot(1, 0);
    out.circuit.ry(0, kPi / 2 - 2 * cb);
    out.circuit.cnot(0, 1);
    out.circuit.rz(1, kPi / 2);
    append_local(out.circuit, m * o1.cast<cplx>() * m.adjoint(), tol);
  }
  const CMat v = circuit_unitary(out.circuit);
  if (1.0 - phase_fidelity(u, Eigen::Matrix4cd(v)) > 1e-9)
    fail(ErrorKind::Numerical, "kak: reconstruction check failed");
  return out;
}

}  // namespace iaoq
