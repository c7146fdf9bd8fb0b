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

#include "iaoq/vqse.hpp"

#include <cmath>

#include "iaoq/error.hpp"
#include "iaoq/orbital_space.hpp"
#include "iaoq/rng.hpp"

namespace iaoq {

namespace {

std::size_t idx4(int n, int a, int b, int c, int d) {
  return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
}

}  // namespace

void VqseProblem::validate() const {
  if (n_elec != 2) fail(ErrorKind::InvalidInput, "vqse: only two-electron references are supported");
  if (n_active < 1 || n_active > n_full) fail(ErrorKind::InvalidInput, "vqse: bad active-space size");
  const auto nf = static_cast<std::size_t>(n_full), na = static_cast<std::size_t>(n_active);
  if (t.size() != nf * nf * nf * nf) fail(ErrorKind::InvalidInput, "vqse: two-body tensor has the wrong size");
  if (rdm1.rows() != n_active || rdm1.cols() != n_active)
    fail(ErrorKind::InvalidInput, "vqse: rdm1 has the wrong size");
  if (rdm2.size() != na * na * na * na) fail(ErrorKind::InvalidInput, "vqse: rdm2 has the wrong size");
  if ((rdm1 - rdm1.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    fail(ErrorKind::InvalidInput, "vqse: rdm1 is not symmetric");
  if (std::abs(rdm1.trace() - 2.0) > 1e-6) fail(ErrorKind::InvalidInput, "vqse: rdm1 trace is not 2");
}

std::vector<double> absorb_one_body(const Mat &h, const PackedEri &eri, int n_elec) {
  if (n_elec != 2) fail(ErrorKind::InvalidInput, "vqse: only two-electron references are supported");
  const int n = static_cast<int>(h.rows());
  if (static_cast<int>(eri.n()) != n) fail(ErrorKind::InvalidInput, "vqse: h and eri sizes differ");
  std::vector<double> t(static_cast<std::size_t>(n) * n * n * n);
  const double f = 1.0 / (2.0 * (n_elec - 1));
  for (int e = 0; e < n; ++e)
    for (int ff = 0; ff < n; ++ff)
      for (int g = 0; g < n; ++g)
        for (int hh = 0; hh < n; ++hh) {
          double v = 0.5 * eri(static_cast<std::size_t>(e), static_cast<std::size_t>(ff),
                               static_cast<std::size_t>(g), static_cast<std::size_t>(hh));
          if (g == hh) v += f * h(e, ff);
          if (e == ff) v += f * h(g, hh);
          t[idx4(n, e, ff, g, hh)] = v;
        }
  return t;
}

VqseProblem VqseProblem::from_integrals(const MOIntegrals &full, const Mat &active,
                                        const Mat &rdm1, const std::vector<double> &rdm2) {
  full.validate();
  const Eigen::Index n = full.n_orb, na = active.cols();
  if (active.rows() != n) fail(ErrorKind::InvalidInput, "vqse: active coefficients have the wrong row count");
  if ((active.transpose() * active - Mat::Identity(na, na)).cwiseAbs().maxCoeff() > 1e-8)
    fail(ErrorKind::InvalidInput, "vqse: active orbitals are not orthonormal");
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat::Identity(n, n) - active * active.transpose());
  Mat q(n, n);
  q.leftCols(na) = active;
  q.rightCols(n - na) = es.eigenvectors().rightCols(n - na);
  const MOIntegrals rot = rotate(full, q);
  VqseProblem p;
  p.n_full = static_cast<int>(n);
  p.n_active = static_cast<int>(na);
  p.e0 = rot.e0;
  p.t = absorb_one_body(rot.h, rot.eri, 2);
  p.rdm1 = rdm1;
  p.rdm2 = rdm2;
  p.validate();
  return p;
}

std::vector<VqseOperator> vqse_operators(const VqseProblem &problem, const VqseOptions &opt) {
  const int n = problem.n_full, na = problem.n_active;
  const int ncreate = opt.active_only ? na : n;
  std::vector<VqseOperator> ops{{0, 0, 0, 0, 0}};
  if (opt.singles)
    for (int p = 0; p < ncreate; ++p)
      for (int r = 0; r < na; ++r) ops.push_back({1, p, r, 0, 0});
  if (opt.doubles)
    for (int t = 0; t < ncreate; ++t)
      for (int u = 0; u < na; ++u)
        for (int v = 0; v < ncreate; ++v)
          for (int w = 0; w < na; ++w)
            if (t * na + u <= v * na + w) ops.push_back({2, t, u, v, w});
  return ops;
}

VqseMatrices build_forms(const VqseProblem &problem, const VqseOptions &opt) {
  problem.validate();
  const int n = problem.n_full, na = problem.n_active;
  auto r1 = [&](int p, int q) { return (p < na && q < na) ? problem.rdm1(p, q) : 0.0; };
  auto r2 = [&](int p, int q, int r, int s) {
    return (p < na && q < na && r < na && s < na) ? problem.rdm2[idx4(na, p, q, r, s)] : 0.0;
  };
  auto T = [&](int e, int f, int g, int h) { return problem.t[idx4(n, e, f, g, h)]; };
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  VqseMatrices vm;
  vm.ops = vqse_operators(problem, opt);
  const auto dim = static_cast<Eigen::Index>(vm.ops.size());
  vm.h = Mat::Zero(dim, dim);
  vm.s = Mat::Zero(dim, dim);

  double h00 = 0.0;
  for (int e = 0; e < na; ++e)
    for (int f = 0; f < na; ++f)
      for (int g = 0; g < na; ++g)
        for (int h = 0; h < na; ++h) h00 += T(e, f, g, h) * r2(e, f, g, h);

  // Row operator i enters as its adjoint: E_sQ for the single (Q, s) and
  // E_yXaZ for the double (X, y, Z, a).
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < dim; ++i) {
    const VqseOperator &bra = vm.ops[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < dim; ++j) {
      const VqseOperator &ket = vm.ops[static_cast<std::size_t>(j)];
      double s = 0.0, h = 0.0;
      if (bra.kind == 0 && ket.kind == 0) {
        s = 1.0;
        h = h00;
      } else if (bra.kind == 0 && ket.kind == 1) {
        const int P = ket.p, r = ket.r;
        s = r1(P, r);
        for (int e = 0; e < na; ++e)
          for (int g = 0; g < na; ++g)
            for (int hh = 0; hh < na; ++hh) h += T(e, P, g, hh) * r2(e, r, g, hh);
        for (int e = 0; e < na; ++e)
          for (int f = 0; f < na; ++f)
            for (int g = 0; g < na; ++g) h += T(e, f, g, P) * r2(e, f, g, r);
      } else if (bra.kind == 1 && ket.kind == 0) {
        const int Q = bra.p, s_ = bra.r;
        s = r1(s_, Q);
        for (int f = 0; f < na; ++f)
          for (int g = 0; g < na; ++g)
            for (int hh = 0; hh < na; ++hh) h += T(Q, f, g, hh) * r2(s_, f, g, hh);
        for (int e = 0; e < na; ++e)
          for (int f = 0; f < na; ++f)
            for (int hh = 0; hh < na; ++hh) h += T(e, f, Q, hh) * r2(e, f, s_, hh);
      } else if (bra.kind == 0 && ket.kind == 2) {
        const int Tt = ket.p, u = ket.r, V = ket.q, w = ket.s;
        s = r2(Tt, u, V, w);
        for (int e = 0; e < na; ++e)
          for (int g = 0; g < na; ++g)
            h += T(e, Tt, g, V) * r2(e, u, g, w) + T(e, V, g, Tt) * r2(e, w, g, u);
      } else if (bra.kind == 2 && ket.kind == 0) {
        const int X = bra.p, y = bra.r, Z = bra.q, a = bra.s;
        s = r2(y, X, a, Z);
        for (int f = 0; f < na; ++f)
          for (int hh = 0; hh < na; ++hh)
            h += T(X, f, Z, hh) * r2(y, f, a, hh) + T(Z, f, X, hh) * r2(y, hh, a, f);
      } else if (bra.kind == 1 && ket.kind == 1) {
        const int Q = bra.p, s_ = bra.r, P = ket.p, r = ket.r;
        s = d(P, Q) * r1(s_, r) + r2(s_, Q, P, r);
        for (int a = 0; a < na; ++a)
          for (int b = 0; b < na; ++b)
            h += T(Q, P, a, b) * r2(s_, r, a, b) + T(Q, a, b, P) * r2(s_, a, b, r) +
                 T(a, P, Q, b) * r2(a, r, s_, b) + T(a, b, Q, P) * r2(a, b, s_, r);
      } else if (bra.kind == 1 && ket.kind == 2) {
        const int Q = bra.p, s_ = bra.r, Tt = ket.p, u = ket.r, V = ket.q, w = ket.s;
        s = d(Q, Tt) * r2(s_, u, V, w) + d(Q, V) * r2(s_, w, Tt, u);
        for (int g = 0; g < na; ++g)
          h += T(Q, Tt, g, V) * r2(s_, u, g, w) + T(Q, V, g, Tt) * r2(s_, w, g, u) +
               T(g, Tt, Q, V) * r2(g, u, s_, w) + T(g, V, Q, Tt) * r2(g, w, s_, u);
      } else if (bra.kind == 2 && ket.kind == 1) {
        const int X = bra.p, y = bra.r, Z = bra.q, a = bra.s, P = ket.p, r = ket.r;
        s = d(X, P) * r2(y, r, a, Z) + d(Z, P) * r2(y, X, a, r);
        for (int k = 0; k < na; ++k)
          h += T(X, P, Z, k) * r2(y, r, a, k) + T(X, k, Z, P) * r2(y, k, a, r) +
               T(Z, P, X, k) * r2(y, k, a, r) + T(Z, k, X, P) * r2(y, r, a, k);
      } else {
        const int X = bra.p, y = bra.r, Z = bra.q, a = bra.s;
        const int Tt = ket.p, u = ket.r, V = ket.q, w = ket.s;
        s = d(X, Tt) * d(Z, V) * r2(y, u, a, w) + d(X, V) * d(Z, Tt) * r2(y, w, a, u);
        h = (T(X, Tt, Z, V) + T(Z, V, X, Tt)) * r2(y, u, a, w) +
            (T(X, V, Z, Tt) + T(Z, Tt, X, V)) * r2(y, w, a, u);
      }
      vm.s(i, j) = s;
      vm.h(i, j) = h + problem.e0 * s;
    }
  }
  return vm;
}

double solve(const VqseMatrices &vm, double threshold) {
  const Mat s = 0.5 * (vm.s + vm.s.transpose());
  const Mat h = 0.5 * (vm.h + vm.h.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  const Vec w = es.eigenvalues();
  const double wmax = w.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (w(k) > threshold * wmax) keep.push_back(k);
  if (keep.empty()) fail(ErrorKind::Numerical, "vqse: empty retained subspace");
  Mat x(s.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    x.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) / std::sqrt(w(keep[c]));
  Eigen::SelfAdjointEigenSolver<Mat> red(x.transpose() * h * x, Eigen::EigenvaluesOnly);
  return red.eigenvalues()(0);
}

VqseStatistics sample_statistics(const VqseProblem &problem, const QuantumState &state,
                                 int n_repeats, int shots, std::uint64_t seed,
                                 const NoiseModel *noise, const OperatorEncoder &encode,
                                 const VqseOptions &opt, double threshold) {
  if (n_repeats < 2) fail(ErrorKind::Config, "vqse: need at least 2 repeats");
  if (shots < 0) fail(ErrorKind::Config, "vqse: shots must be >= 0");
  VqseStatistics st;
  for (int k = 0; k < n_repeats; ++k) {
    SamplingOptions so{shots, derive_seed(seed, static_cast<std::uint64_t>(k)), noise, nullptr};
    const RDMPair rd = measure_rdms(state, problem.n_active, so, encode);
    VqseProblem pk = problem;
    pk.rdm1 = rd.spin_summed_rdm1();
    pk.rdm2 = rd.spin_summed_rdm2();
    // Shot noise breaks the exact trace; rescale to two electrons.
    const double tr = pk.rdm1.trace();
    if (!(tr > 0)) fail(ErrorKind::Numerical, "vqse: sampled rdm1 has non-positive trace");
    pk.rdm1 *= 2.0 / tr;
    st.samples.push_back(solve(build_forms(pk, opt), threshold));
  }
  double mean = 0.0;
  for (double v : st.samples) mean += v;
  mean /= n_repeats;
  double var = 0.0;
  for (double v : st.samples) var += (v - mean) * (v - mean);
  var /= (n_repeats - 1);
  st.mean = mean;
  st.std_error = std::sqrt(var / n_repeats);
  return st;
}

}  // namespace iaoq
