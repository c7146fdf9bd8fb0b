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

#include "iaoq/iao.hpp"

#include <cmath>
#include <sstream>

#include "iaoq/error.hpp"

namespace iaoq {

namespace {

Mat inverse_sqrt(const Mat &g, const char *what) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  const Vec &w = es.eigenvalues();
  if (w.size() == 0 || !(w.minCoeff() > 1e-10)) {
    std::ostringstream msg;
    msg << what << " (smallest Gram eigenvalue "
        << (w.size() ? w.minCoeff() : 0.0) << ")";
    fail(ErrorKind::Numerical, msg.str());
  }
  return es.eigenvectors() * w.cwiseInverse().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

IAOBasis build_iao(const Mat &s1, const Mat &s12, const Mat &s2,
                   const Mat &c_occ) {
  const Eigen::Index n1 = s1.rows();
  if (s12.rows() != n1 || s2.rows() != s12.cols() || c_occ.rows() != n1)
    fail(ErrorKind::InvalidInput, "build_iao: inconsistent dimensions");
  if (c_occ.cols() < 1) fail(ErrorKind::InvalidInput, "build_iao: needs occupied orbitals");
  Eigen::LLT<Mat> l1(s1), l2(s2);
  if (l1.info() != Eigen::Success || l2.info() != Eigen::Success)
    fail(ErrorKind::Numerical, "build_iao: overlap not positive definite");
  const Mat p12 = l1.solve(s12);
  // Depolarized occupied orbitals P12 P21 |chi_i>.
  Mat ctil = p12 * l2.solve(s12.transpose() * c_occ);
  ctil = ctil * inverse_sqrt(ctil.transpose() * s1 * ctil,
                             "depolarized occupied orbitals are rank deficient");
  const Mat id = Mat::Identity(n1, n1);
  const Mat o = c_occ * c_occ.transpose() * s1;
  const Mat ot = ctil * ctil.transpose() * s1;
  IAOBasis out;
  out.coeff = (o * ot + (id - o) * (id - ot)) * p12;
  return out;
}

IAOBasis build_iao(const IntegralBundle &bundle) {
  if (bundle.n_occ < 1) fail(ErrorKind::InvalidInput, "build_iao: n_occ must be >= 1");
  return build_iao(bundle.s1, bundle.s12, bundle.s2, bundle.occupied());
}

IAOBasis lowdin_orthonormalize(const IAOBasis &basis, const Mat &s1) {
  IAOBasis out = basis;
  out.coeff = basis.coeff * inverse_sqrt(basis.coeff.transpose() * s1 * basis.coeff,
                                         "near-linear dependence in orbital set");
  out.orthonormalized = true;
  return out;
}

double boys_functional(const Mat &coeff, const std::array<Mat, 3> &dipole) {
  double f = 0.0;
  for (const auto &d : dipole) {
    Vec diag = (coeff.transpose() * d * coeff).diagonal();
    f += diag.squaredNorm();
  }
  return f;
}

BoysResult boys_localize(const IAOBasis &basis, const std::array<Mat, 3> &dipole,
                         const Mat &s1, int max_sweeps, double tol) {
  if (!basis.orthonormalized)
    fail(ErrorKind::InvalidInput, "boys_localize: basis must be orthonormalized");
  Mat c = basis.coeff;
  const Eigen::Index m = c.cols();
  if ((c.transpose() * s1 * c - Mat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-8)
    fail(ErrorKind::InvalidInput, "boys_localize: basis is not s1-orthonormal");
  std::array<Mat, 3> r;
  for (int k = 0; k < 3; ++k) r[k] = c.transpose() * dipole[k] * c;

  BoysResult res;
  double f = boys_functional(c, dipole);
  res.history.push_back(f);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double f_start = f;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i + 1; j < m; ++j) {
        double a = 0.0, b = 0.0;
        for (int k = 0; k < 3; ++k) {
          double d = 0.5 * (r[k](i, i) - r[k](j, j));
          double z = r[k](i, j);
          a += d * d - z * z;
          b += 2.0 * d * z;
        }
        double gain = std::hypot(a, b) - a;
        if (!(gain > 1e-14)) continue;
        double theta = 0.25 * std::atan2(b, a);
        double cs = std::cos(theta), sn = std::sin(theta);
        Vec ci = c.col(i), cj = c.col(j);
        c.col(i) = cs * ci + sn * cj;
        c.col(j) = -sn * ci + cs * cj;
        for (int k = 0; k < 3; ++k) {
          Vec ri = r[k].col(i), rj = r[k].col(j);
          r[k].col(i) = cs * ri + sn * rj;
          r[k].col(j) = -sn * ri + cs * rj;
          Eigen::RowVectorXd qi = r[k].row(i), qj = r[k].row(j);
          r[k].row(i) = cs * qi + sn * qj;
          r[k].row(j) = -sn * qi + cs * qj;
        }
        f = 0.0;
        for (int k = 0; k < 3; ++k) f += r[k].diagonal().squaredNorm();
        res.history.push_back(f);
      }
    res.sweeps = sweep + 1;
    if (f - f_start < tol) {
      res.converged = true;
      break;
    }
  }
  res.basis = basis;
  res.basis.coeff = c;
  res.basis.localized = true;
  return res;
}

double span_residual(const Mat &orthonormal, const Mat &s1, const Mat &c_occ) {
  Mat resid = c_occ - orthonormal * (orthonormal.transpose() * s1 * c_occ);
  return std::sqrt(std::max(0.0, (resid.transpose() * s1 * resid).trace()));
}

}  // namespace iaoq
