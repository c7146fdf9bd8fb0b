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

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iaoq/integrals.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

/**
 * Pauli string as bit masks: qubit q carries X if only x has bit q, Z if
 * only z, Y if both. Bit q of a basis index is qubit q.
 */
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  bool operator<(const PauliString &o) const {
    return x != o.x ? x < o.x : z < o.z;
  }
  bool operator==(const PauliString &o) const { return x == o.x && z == o.z; }

  std::uint64_t support() const { return x | z; }
  bool is_identity() const { return (x | z) == 0; }
  bool commutes_with(const PauliString &o) const;
  // Qubit-wise commuting: on every qubit the letters agree or one is I.
  bool qubitwise_commutes_with(const PauliString &o) const;

  // Letters with qubit 0 rightmost.
  std::string letters(int n) const;
  static PauliString from_letters(const std::string &s);
  static PauliString single(int q, char letter);
};

// Product a*b = phase * c.
std::pair<cplx, PauliString> multiply(const PauliString &a,
                                      const PauliString &b);

// P|i> = phase(P, i) |i ^ P.x>.
inline cplx apply_phase(const PauliString &p, std::uint64_t i) {
  static const cplx ipow[4] = {1.0, I_, -1.0, -I_};
  int k = __builtin_popcountll(p.x & p.z) + 2 * __builtin_popcountll(i & p.z);
  return ipow[k & 3];
}

class PauliSum {
 public:
  using Terms = std::map<PauliString, cplx>;

  PauliSum() = default;
  explicit PauliSum(int n_qubits);

  static PauliSum identity(int n, cplx c = 1.0);
  static PauliSum term(int n, const PauliString &p, cplx c = 1.0);
  static PauliSum term(int n, const std::string &letters, cplx c = 1.0);

  int n_qubits() const { return n_; }
  const Terms &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  cplx coefficient(const PauliString &p) const;

  void add(const PauliString &p, cplx c);
  PauliSum &operator+=(const PauliSum &o);
  PauliSum &operator-=(const PauliSum &o);
  PauliSum &operator*=(cplx c);

  friend PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum &b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx c) { return a *= c; }
  friend PauliSum operator*(cplx c, PauliSum a) { return a *= c; }
  friend PauliSum operator*(const PauliSum &a, const PauliSum &b);

  PauliSum adjoint() const;
  // Drops terms with |coeff| < threshold.
  PauliSum simplified(double threshold = 1e-12) const;
  bool is_hermitian(double tol = 1e-10) const;
  // Largest |imag| over all coefficients.
  double max_imag() const;
  double one_norm() const;

  // y = this * psi.
  CVec apply(const CVec &psi) const;
  // Dense 2^n x 2^n matrix (n <= 14).
  CMat to_dense() const;

  // "re im LETTERS" lines, qubit 0 rightmost.
  std::string to_text() const;
  static PauliSum from_text(const std::string &text);

  // Pauli decomposition of a dense 2^n x 2^n operator.
  static PauliSum from_dense(const CMat &m, double threshold = 1e-14);

 private:
  int n_ = 0;
  Terms terms_;
};

PauliSum commutator(const PauliSum &a, const PauliSum &b);

enum class Spin { Up, Down };

// Qubit carrying spatial orbital p with the given spin: p or n + p.
int spin_orbital_qubit(int p, Spin s, int n);

PauliSum jw_creation(int p, Spin s, int n);
PauliSum jw_annihilation(int p, Spin s, int n);
// a^dag_{p s} a_{r s} as Pauli strings (X^s_pr).
PauliSum jw_excitation(int p, int r, Spin s, int n);

struct MappingOptions {
  int qubit_budget = 14;
  double threshold = 1e-12;
};

PauliSum map_hamiltonian(const MOIntegrals &mo, const MappingOptions &opt = {});
PauliSum number_operator(int n);
PauliSum sz_operator(int n);
PauliSum s_squared_operator(int n, int qubit_budget = 14);

}  // namespace iaoq
