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
#include <optional>
#include <vector>

#include "iaoq/integrals.hpp"
#include "iaoq/pauli.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

/// Fixed (N_up, N_down) block of a Jordan-Wigner register with n_orb
/// spatial orbitals: up spin on qubits [0, n_orb), down on [n_orb, 2 n_orb).
struct Sector {
  int n_orb = 0;
  int n_up = 0;
  int n_down = 0;

  static Sector from_counts(int n_orb, int n_elec, int ms2);
  // Basis indices of the sector in ascending order.
  std::vector<std::uint64_t> basis() const;
};

struct FCIResult {
  Vec energies;                      // ascending
  CMat vectors;                      // columns in the `basis` ordering
  std::vector<std::uint64_t> basis;  // register indices spanned by `vectors`
  int n_qubits = 0;
  std::vector<double> s2;            // <S^2> per state when available

  // Column k scattered into the full 2^n_qubits register.
  CVec state(int k) const;
  double ground_energy() const { return energies(0); }
};

struct FciOptions {
  std::optional<Sector> sector;
  // S^2 on the same register as H, used for labels and to split degenerate
  // blocks.
  const PauliSum *s2_operator = nullptr;
  double degeneracy_tol = 1e-8;
};

// Determinant-space solve built from the integrals directly (no Pauli
// algebra); vectors use the Jordan-Wigner register ordering and signs.
FCIResult fci(const MOIntegrals &mo, int n_elec, int ms2 = 0);

// Sector-projected dense solve of a qubit Hamiltonian.
FCIResult fci(const PauliSum &h, const FciOptions &opt = {});

// <D'| a^dag_P a_R |D> on spin-orbital bit strings; returns 0 when the
// result vanishes, otherwise +-1 with `out` set to D'.
int excite(std::uint64_t det, int p, int r, std::uint64_t &out);

// Hamiltonian matrix in the determinant basis of the sector.
Mat determinant_hamiltonian(const MOIntegrals &mo, const Sector &sector);
Mat determinant_s_squared(const Sector &sector);

}  // namespace iaoq
