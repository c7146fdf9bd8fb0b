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

#include <string>
#include <utility>
#include <vector>

#include "iaoq/bundle.hpp"
#include "iaoq/integrals.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

struct ActiveSpace {
  Mat coeff;                   // source basis x n_active
  std::vector<int> frozen;     // source-orbital indices folded as core
  std::string label;           // full | hono-luno | hf-window | custom
};

// h = C^T hcore C and (pr|qs) by sequential quarter transformations.
// Coefficients must be orthonormal under `metric` within 1e-8.
MOIntegrals ao2mo(const Mat &hcore, const PackedEri &eri, const Mat &coeff,
                  const Mat &metric, double e0);
MOIntegrals ao2mo(const IntegralBundle &bundle, const Mat &coeff);

// Same contraction: packed half-transforms (OpenMP) and a serial dense
// reference.
PackedEri transform_eri(const PackedEri &eri, const Mat &coeff);
PackedEri transform_eri_reference(const PackedEri &eri, const Mat &coeff);

// Orthogonal rotation of an already orthonormal orbital set.
MOIntegrals rotate(const MOIntegrals &mo, const Mat &u);

MOIntegrals freeze_core(const MOIntegrals &mo, const std::vector<int> &core);

double rhf_energy(const MOIntegrals &mo, int n_occ);

// Closed-shell Fock matrix from the lowest n_occ orbitals.
Mat fock_matrix(const MOIntegrals &mo, int n_occ);

struct MP2Result {
  double corr_energy = 0.0;
  Mat rdm1;  // spin-summed, in the input orbital basis
};

// Unrelaxed closed-shell MP2 in semicanonical orbitals of one Fock build.
MP2Result mp2(const MOIntegrals &mo, int n_occ);

struct NaturalOrbitals {
  Vec occupations;  // descending
  Mat rotation;     // columns are the natural orbitals
};

NaturalOrbitals natural_orbitals(const Mat &rdm1);

enum class SelectorKind { Full, HonoLuno, HfWindow };

struct Selector {
  SelectorKind kind = SelectorKind::Full;
  int window = 0;  // orbitals in the hf-window

  static Selector parse(const std::string &s);
};

// Active-space Hamiltonian; `mo` orbitals must be canonical-HF ordered with
// n_elec/2 occupied orbitals first.
std::pair<MOIntegrals, ActiveSpace> make_active_space(const MOIntegrals &mo,
                                                      const Selector &selector,
                                                      int n_active_elec);

}  // namespace iaoq
