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

#include "iaoq/pauli.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "iaoq/error.hpp"

namespace iaoq {

namespace {

int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

void check_same_size(int a, int b) {
  if (a != b) fail(ErrorKind::InvalidInput, "Pauli operands have different qubit counts");
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

bool PauliString::commutes_with(const PauliString &o) const {
  return ((popcount(x & o.z) + popcount(z & o.x)) & 1) == 0;
}

bool PauliString::qubitwise_commutes_with(const PauliString &o) const {
  std::uint64_t both = support() & o.support();
  return ((x ^ o.x) & both) == 0 && ((z ^ o.z) & both) == 0;
}

std::string PauliString::letters(int n) const {
  std::string s(static_cast<std::size_t>(n), 'I');
  for (int q = 0; q < n; ++q) {
    bool bx = (x >> q) & 1, bz = (z >> q) & 1;
    s[static_cast<std::size_t>(n - 1 - q)] = bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }
  return s;
}

PauliString PauliString::from_letters(const std::string &s) {
  if (s.size() > 64) fail(ErrorKind::InvalidInput, "Pauli string longer than 64 qubits");
  PauliString p;
  const int n = static_cast<int>(s.size());
  for (int k = 0; k < n; ++k) {
    int q = n - 1 - k;
    switch (s[static_cast<std::size_t>(k)]) {
      case 'I':
        break;
      case 'X':
        p.x |= 1ull << q;
        break;
      case 'Y':
        p.x |= 1ull << q;
        p.z |= 1ull << q;
        break;
      case 'Z':
        p.z |= 1ull << q;
        break;
      default:
        fail(ErrorKind::InvalidInput, "invalid Pauli letter in " + s);
    }
  }
  return p;
}

PauliString PauliString::single(int q, char letter) {
  PauliString p;
  if (letter == 'X' || letter == 'Y') p.x = 1ull << q;
  if (letter == 'Z' || letter == 'Y') p.z = 1ull << q;
  return p;
}

std::pair<cplx, PauliString> multiply(const PauliString &a,
                                      const PauliString &b) {
  static const cplx ipow[4] = {1.0, I_, -1.0, -I_};
  const std::uint64_t xa = a.x & ~a.z, ya = a.x & a.z, za = ~a.x & a.z;
  const std::uint64_t xb = b.x & ~b.z, yb = b.x & b.z, zb = ~b.x & b.z;
  const std::uint64_t plus = (xa & yb) | (ya & zb) | (za & xb);
  const std::uint64_t minus = (ya & xb) | (za & yb) | (xa & zb);
  int k = (popcount(plus) - popcount(minus)) & 3;
  return {ipow[k], PauliString{a.x ^ b.x, a.z ^ b.z}};
}

PauliSum::PauliSum(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 64)
    fail(ErrorKind::InvalidInput, "qubit count out of range");
}

PauliSum PauliSum::identity(int n, cplx c) { return term(n, PauliString{}, c); }

PauliSum PauliSum::term(int n, const PauliString &p, cplx c) {
  PauliSum s(n);
  if (n < 64 && (p.support() >> n) != 0)
    fail(ErrorKind::InvalidInput, "Pauli string acts outside the register");
  s.add(p, c);
  return s;
}

PauliSum PauliSum::term(int n, const std::string &letters, cplx c) {
  if (static_cast<int>(letters.size()) != n)
    fail(ErrorKind::InvalidInput, "Pauli string length does not match qubit count");
  return term(n, PauliString::from_letters(letters), c);
}

cplx PauliSum::coefficient(const PauliString &p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

void PauliSum::add(const PauliString &p, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.emplace(p, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

PauliSum &PauliSum::operator+=(const PauliSum &o) {
  check_same_size(n_, o.n_);
  for (const auto &[p, c] : o.terms_) add(p, c);
  return *this;
}

PauliSum &PauliSum::operator-=(const PauliSum &o) {
  check_same_size(n_, o.n_);
  for (const auto &[p, c] : o.terms_) add(p, -c);
  return *this;
}

PauliSum &PauliSum::operator*=(cplx c) {
  if (c == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto &kv : terms_) kv.second *= c;
  return *this;
}

PauliSum operator*(const PauliSum &a, const PauliSum &b) {
  check_same_size(a.n_, b.n_);
  PauliSum out(a.n_);
  for (const auto &[pa, ca] : a.terms_)
    for (const auto &[pb, cb] : b.terms_) {
      auto [ph, p] = multiply(pa, pb);
      out.add(p, ph * ca * cb);
    }
  return out;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_);
  for (const auto &[p, c] : terms_) out.terms_.emplace(p, std::conj(c));
  return out;
}

PauliSum PauliSum::simplified(double threshold) const {
  PauliSum out(n_);
  for (const auto &[p, c] : terms_)
    if (std::abs(c) >= threshold) out.terms_.emplace(p, c);
  return out;
}

double PauliSum::max_imag() const {
  double m = 0.0;
  for (const auto &kv : terms_) m = std::max(m, std::abs(kv.second.imag()));
  return m;
}

bool PauliSum::is_hermitian(double tol) const { return max_imag() <= tol; }

double PauliSum::one_norm() const {
  double s = 0.0;
  for (const auto &kv : terms_) s += std::abs(kv.second);
  return s;
}

CVec PauliSum::apply(const CVec &psi) const {
  const std::uint64_t dim = 1ull << n_;
  if (static_cast<std::uint64_t>(psi.size()) != dim)
    fail(ErrorKind::InvalidInput, "state dimension does not match Pauli register");
  CVec out = CVec::Zero(psi.size());
  for (const auto &[p, c] : terms_) {
    const std::int64_t d = static_cast<std::int64_t>(dim);
#pragma omp parallel for if (d > 4096)
    for (std::int64_t i = 0; i < d; ++i) {
      const auto u = static_cast<std::uint64_t>(i);
      out[static_cast<Eigen::Index>(u ^ p.x)] += c * apply_phase(p, u) * psi[i];
    }
  }
  return out;
}

CMat PauliSum::to_dense() const {
  if (n_ > 14) fail(ErrorKind::InvalidInput, "dense Pauli matrix limited to 14 qubits");
  const std::uint64_t dim = 1ull << n_;
  CMat m = CMat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto &[p, c] : terms_)
    for (std::uint64_t i = 0; i < dim; ++i)
      m(static_cast<Eigen::Index>(i ^ p.x), static_cast<Eigen::Index>(i)) +=
          c * apply_phase(p, i);
  return m;
}

PauliSum PauliSum::from_dense(const CMat &m, double threshold) {
  const auto dim = static_cast<std::uint64_t>(m.rows());
  int n = 0;
  while ((1ull << n) < dim) ++n;
  if ((1ull << n) != dim || m.cols() != m.rows())
    fail(ErrorKind::InvalidInput, "matrix dimension is not a power of two");
  if (n > 7) fail(ErrorKind::InvalidInput, "Pauli decomposition limited to 7 qubits");
  PauliSum out(n);
  for (std::uint64_t x = 0; x < dim; ++x)
    for (std::uint64_t z = 0; z < dim; ++z) {
      PauliString p{x, z};
      cplx tr = 0.0;
      // Tr(P M) = sum_j P_{j^x, j} M_{j, j^x}
      for (std::uint64_t j = 0; j < dim; ++j)
        tr += apply_phase(p, j) *
              m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ x));
      tr /= static_cast<double>(dim);
      if (std::abs(tr) >= threshold) out.terms_.emplace(p, tr);
    }
  return out;
}

std::string PauliSum::to_text() const {
  std::ostringstream out;
  for (const auto &[p, c] : terms_)
    out << format_real(c.real()) << " " << format_real(c.imag()) << " "
        << p.letters(n_) << "\n";
  return out.str();
}

PauliSum PauliSum::from_text(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  PauliSum out;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string re, im, letters, extra;
    if (!(ls >> re >> im >> letters) || (ls >> extra))
      fail(ErrorKind::InvalidInput, "malformed Pauli line: " + line);
    double vre = 0, vim = 0;
    auto parse = [&](const std::string &s, double &v) {
      const char *b = s.data(), *e = s.data() + s.size();
      if (b != e && *b == '+') ++b;
      auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || ptr != e)
        fail(ErrorKind::InvalidInput, "malformed Pauli coefficient: " + line);
    };
    parse(re, vre);
    parse(im, vim);
    if (n < 0) {
      n = static_cast<int>(letters.size());
      out = PauliSum(n);
    } else if (static_cast<int>(letters.size()) != n) {
      fail(ErrorKind::InvalidInput, "inconsistent Pauli string lengths");
    }
    out.add(PauliString::from_letters(letters), cplx(vre, vim));
  }
  if (n < 0) fail(ErrorKind::InvalidInput, "empty Pauli sum text");
  return out;
}

PauliSum commutator(const PauliSum &a, const PauliSum &b) { return a * b - b * a; }

int spin_orbital_qubit(int p, Spin s, int n) {
  if (p < 0 || p >= n)
    fail(ErrorKind::InvalidInput, "orbital index out of range");
  return s == Spin::Up ? p : n + p;
}

namespace {

// |1><0| (raise = true) or |0><1| on qubit q.
PauliSum ladder(int n_qubits, int q, bool raise) {
  PauliSum s(n_qubits);
  s.add(PauliString::single(q, 'X'), 0.5);
  s.add(PauliString::single(q, 'Y'), raise ? cplx(0.0, -0.5) : cplx(0.0, 0.5));
  return s;
}

PauliSum z_string(int n_qubits, int lo, int hi) {
  PauliString p;
  for (int q = lo; q < hi; ++q) p.z |= 1ull << q;
  return PauliSum::term(n_qubits, p);
}

}  // namespace

PauliSum jw_creation(int p, Spin s, int n) {
  const int q = spin_orbital_qubit(p, s, n);
  return ladder(2 * n, q, true) * z_string(2 * n, 0, q);
}

PauliSum jw_annihilation(int p, Spin s, int n) {
  return jw_creation(p, s, n).adjoint();
}

PauliSum jw_excitation(int p, int r, Spin s, int n) {
  const int qp = spin_orbital_qubit(p, s, n);
  const int qr = spin_orbital_qubit(r, s, n);
  const int nq = 2 * n;
  if (p == r) {
    PauliSum out = PauliSum::identity(nq, 0.5);
    out.add(PauliString::single(qp, 'Z'), -0.5);
    return out;
  }
  // p > r: raise_p Z_{r+1..p-1} lower_r; p < r: lower_r Z_{p+1..r-1} raise_p.
  const int lo = std::min(qp, qr), hi = std::max(qp, qr);
  return ladder(nq, qp, true) * z_string(nq, lo + 1, hi) * ladder(nq, qr, false);
}

PauliSum map_hamiltonian(const MOIntegrals &mo, const MappingOptions &opt) {
  mo.validate();
  const int n = mo.n_orb;
  const int nq = 2 * n;
  if (nq > opt.qubit_budget) {
    std::ostringstream msg;
    msg << "qubit budget exceeded: " << nq << " > " << opt.qubit_budget;
    fail(ErrorKind::InvalidInput, msg.str());
  }
  const Spin spins[2] = {Spin::Up, Spin::Down};
  std::vector<PauliSum> e(static_cast<std::size_t>(2 * n * n));
  auto E = [&](int s, int p, int r) -> PauliSum & {
    return e[static_cast<std::size_t>((s * n + p) * n + r)];
  };
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r) E(s, p, r) = jw_excitation(p, r, spins[s], n);

  PauliSum h = PauliSum::identity(nq, mo.e0);
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) {
      double v = mo.h(p, r);
      if (v == 0.0) continue;
      for (int s = 0; s < 2; ++s) h += E(s, p, r) * cplx(v);
    }
  // 1/2 sum (pr|qs) a+_p a+_q a_s a_r = 1/2 sum (pr|qs) [E_pr E_qs - d_qr E_ps]
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r)
      for (int q = 0; q < n; ++q)
        for (int t = 0; t < n; ++t) {
          double v = 0.5 * mo.eri(p, r, q, t);
          if (v == 0.0) continue;
          for (int s1 = 0; s1 < 2; ++s1) {
            for (int s2 = 0; s2 < 2; ++s2) h += (E(s1, p, r) * E(s2, q, t)) * cplx(v);
            if (q == r) h -= E(s1, p, t) * cplx(v);
          }
        }
  return h.simplified(opt.threshold);
}

PauliSum number_operator(int n) {
  PauliSum out(2 * n);
  for (int q = 0; q < 2 * n; ++q) {
    out.add(PauliString{}, 0.5);
    out.add(PauliString::single(q, 'Z'), -0.5);
  }
  return out;
}

PauliSum sz_operator(int n) {
  PauliSum out(2 * n);
  for (int p = 0; p < n; ++p) {
    out.add(PauliString::single(p, 'Z'), -0.25);
    out.add(PauliString::single(n + p, 'Z'), 0.25);
  }
  return out;
}

PauliSum s_squared_operator(int n, int qubit_budget) {
  if (2 * n > qubit_budget) fail(ErrorKind::InvalidInput, "qubit budget exceeded");
  PauliSum sp(2 * n);
  for (int p = 0; p < n; ++p)
    sp += jw_creation(p, Spin::Up, n) * jw_annihilation(p, Spin::Down, n);
  PauliSum sm = sp.adjoint();
  PauliSum sz = sz_operator(n);
  return (sz * sz + sz + sm * sp).simplified();
}

}  // namespace iaoq
