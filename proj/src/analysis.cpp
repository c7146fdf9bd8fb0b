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

#include "iaoq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "iaoq/error.hpp"

namespace iaoq {

namespace {

std::size_t idx4(int n, int a, int b, int c, int d) {
  return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
}

Spin spin(int s) { return s ? Spin::Down : Spin::Up; }

}  // namespace

double RDMPair::two(int s, int t, int p, int r, int q, int u) const {
  return rdm2[static_cast<std::size_t>(2 * s + t)][idx4(n_orb, p, r, q, u)];
}

Mat RDMPair::spin_summed_rdm1() const { return rdm1[0] + rdm1[1]; }

std::vector<double> RDMPair::spin_summed_rdm2() const {
  std::vector<double> out(rdm2[0].size(), 0.0);
  for (const auto &block : rdm2)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += block[i];
  return out;
}

RDMPair measure_rdms(const QuantumState &state, int n_orb, const SamplingOptions &opt,
                     const OperatorEncoder &encode) {
  if (n_orb < 1 || 2 * n_orb > 14) fail(ErrorKind::InvalidInput, "rdm: orbital count outside the qubit budget");
  auto enc = [&](const PauliSum &o) { return encode ? encode(o) : o; };
  const int n = n_orb;
  std::vector<PauliSum> x;  // x[(s n + p) n + r] = X^s_pr
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) x.push_back(jw_excitation(p, r, spin(s), n));
  auto X = [&](int s, int p, int r) -> const PauliSum & {
    return x[static_cast<std::size_t>((s * n + p) * n + r)];
  };

  std::vector<PauliSum> one, two;
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) one.push_back(enc(X(s, p, r)));
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t)
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r)
          for (int q = 0; q < n; ++q)
            for (int u = 0; u < n; ++u) {
              PauliSum o = X(s, p, r) * X(t, q, u);
              if (q == r && s == t) o -= X(s, p, u);
              two.push_back(enc(o.simplified(1e-14)));
            }

  std::set<PauliString> strings;
  for (const auto *list : {&one, &two})
    for (const auto &o : *list)
      for (const auto &[p, c] : o.terms()) strings.insert(p);
  const std::vector<PauliString> lst(strings.begin(), strings.end());
  const std::vector<double> vals = estimate_paulis(state, lst, opt);
  std::map<PauliString, double> value;
  for (std::size_t i = 0; i < lst.size(); ++i) value[lst[i]] = vals[i];

  RDMPair out;
  out.n_orb = n;
  auto ev = [&](const PauliSum &o) {
    cplx acc = 0.0;
    for (const auto &[p, c] : o.terms()) acc += c * value.at(p);
    out.max_imag = std::max(out.max_imag, std::abs(acc.imag()));
    return acc.real();
  };
  std::size_t k = 0;
  for (int s = 0; s < 2; ++s) {
    Mat m(n, n);
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) m(p, r) = ev(one[k++]);
    out.asymmetry = std::max(out.asymmetry, (m - m.transpose()).cwiseAbs().maxCoeff());
    out.rdm1[static_cast<std::size_t>(s)] = 0.5 * (m + m.transpose());
  }
  k = 0;
  const std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
  for (std::size_t b = 0; b < 4; ++b) {
    std::vector<double> raw(n4);
    for (std::size_t i = 0; i < n4; ++i) raw[i] = ev(two[k++]);
    auto &sym = out.rdm2[b];
    sym.assign(n4, 0.0);
    // rho_prqs and rho_rpsq are complex conjugates.
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r)
        for (int q = 0; q < n; ++q)
          for (int u = 0; u < n; ++u) {
            const double a = raw[idx4(n, p, r, q, u)], c = raw[idx4(n, r, p, u, q)];
            out.asymmetry = std::max(out.asymmetry, std::abs(a - c));
            sym[idx4(n, p, r, q, u)] = 0.5 * (a + c);
          }
  }
  return out;
}

double energy_from_rdms(const RDMPair &rdms, const MOIntegrals &mo) {
  const int n = rdms.n_orb;
  if (mo.n_orb != n) fail(ErrorKind::InvalidInput, "rdm: orbital counts differ");
  double e = mo.e0;
  for (int s = 0; s < 2; ++s) e += (mo.h.array() * rdms.rdm1[static_cast<std::size_t>(s)].array()).sum();
  const std::vector<double> r2 = rdms.spin_summed_rdm2();
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r)
      for (int q = 0; q < n; ++q)
        for (int u = 0; u < n; ++u)
          e += 0.5 * mo.eri(static_cast<std::size_t>(p), static_cast<std::size_t>(r),
                            static_cast<std::size_t>(q), static_cast<std::size_t>(u)) *
               r2[idx4(n, p, r, q, u)];
  return e;
}

double s_squared(const QuantumState &state, int n_orb, const SamplingOptions &opt,
                 const OperatorEncoder &encode) {
  PauliSum op = s_squared_operator(n_orb);
  if (encode) op = encode(op);
  return estimate(state, op, opt);
}

void PESCurve::validate() const {
  if (r.size() != e.size()) fail(ErrorKind::InvalidInput, "curve: R and E lengths differ");
  if (!sigma.empty() && sigma.size() != r.size())
    fail(ErrorKind::InvalidInput, "curve: sigma length differs from R");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) fail(ErrorKind::InvalidInput, "curve: R must be strictly increasing");
}

std::string PESCurve::to_csv() const {
  validate();
  std::ostringstream os;
  os << std::setprecision(17) << "R,E,sigma\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    os << r[i] << ',' << e[i] << ',' << (sigma.empty() ? 0.0 : sigma[i]) << '\n';
  return os.str();
}

PESCurve PESCurve::from_csv(const std::string &text, const std::string &method) {
  PESCurve c;
  c.method = method;
  std::istringstream is(text);
  std::string line;
  bool header = true, any_sigma = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("R", 0) == 0) continue;
    }
    std::istringstream ls(line);
    std::string a, b, s;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
      fail(ErrorKind::InvalidInput, "curve: malformed line " + std::to_string(lineno));
    std::getline(ls, s, ',');
    try {
      c.r.push_back(std::stod(a));
      c.e.push_back(std::stod(b));
      c.sigma.push_back(s.empty() ? 0.0 : std::stod(s));
    } catch (const std::exception &) {
      fail(ErrorKind::InvalidInput, "curve: non-numeric value on line " + std::to_string(lineno));
    }
    any_sigma = any_sigma || c.sigma.back() != 0.0;
  }
  if (!any_sigma) c.sigma.clear();
  c.validate();
  return c;
}

FitResult fit_equilibrium(const PESCurve &curve) {
  curve.validate();
  const std::size_t n = curve.r.size();
  if (n < 5) fail(ErrorKind::InvalidInput, "fit: need at least 5 points");
  const auto kmin = static_cast<std::size_t>(
      std::min_element(curve.e.begin(), curve.e.end()) - curve.e.begin());
  if (kmin == 0 || kmin == n - 1) fail(ErrorKind::Numerical, "fit: no interior minimum");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const double r0 = curve.r[kmin];
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(curve.r[a] - r0) < std::abs(curve.r[b] - r0);
  });
  order.resize(5);
  double lo = r0, hi = r0;
  for (auto i : order) {
    lo = std::min(lo, curve.r[i]);
    hi = std::max(hi, curve.r[i]);
  }
  const double scale = hi - lo;
  Mat a(5, 5);
  Vec y(5);
  for (int row = 0; row < 5; ++row) {
    const double x = (curve.r[order[static_cast<std::size_t>(row)]] - r0) / scale;
    for (int c = 0; c < 5; ++c) a(row, c) = std::pow(x, c);
    y(row) = curve.e[order[static_cast<std::size_t>(row)]];
  }
  const Vec coef = a.colPivHouseholderQr().solve(y);
  auto p = [&](double x) {
    return coef(0) + x * (coef(1) + x * (coef(2) + x * (coef(3) + x * coef(4))));
  };
  auto dp = [&](double x) {
    return coef(1) + x * (2 * coef(2) + x * (3 * coef(3) + x * 4 * coef(4)));
  };
  auto d2p = [&](double x) { return 2 * coef(2) + x * (6 * coef(3) + x * 12 * coef(4)); };
  const double xl = (lo - r0) / scale, xh = (hi - r0) / scale;
  double best = xl;
  for (int i = 0; i <= 4000; ++i) {
    const double x = xl + (xh - xl) * i / 4000.0;
    if (p(x) < p(best)) best = x;
  }
  for (int it = 0; it < 50; ++it) {
    const double h2 = d2p(best);
    if (!(h2 > 0)) break;
    const double next = std::clamp(best - dp(best) / h2, xl, xh);
    if (std::abs(next - best) < 1e-15) break;
    best = next;
  }
  FitResult f;
  f.r_eq = r0 + best * scale;
  f.e_min = p(best);
  f.delta_e = curve.e.back() - f.e_min;
  return f;
}

double mean_deviation(const PESCurve &a, const PESCurve &b) {
  if (a.r.size() != b.r.size() || a.r.empty())
    fail(ErrorKind::InvalidInput, "curves: grids differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.r.size(); ++i) {
    if (std::abs(a.r[i] - b.r[i]) > 1e-9) fail(ErrorKind::InvalidInput, "curves: grids differ");
    acc += std::abs(a.e[i] - b.e[i]);
  }
  return acc / static_cast<double>(a.r.size());
}

}  // namespace iaoq
