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
#include <vector>

#include "iaoq/pauli.hpp"
#include "iaoq/simulator.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

struct ExcitationBasis {
  std::vector<PauliSum> ops;
  std::vector<std::string> labels;

  // sum_s a^dag_{a s} a_{i s} and sum_{s t} a^dag_{a s} a^dag_{b t} a_{j t} a_{i s}
  // over spatial occupied i <= j and virtual a <= b of n_orb orbitals.
  static ExcitationBasis spin_summed(const std::vector<int> &occ, const std::vector<int> &vir,
                                     int n_orb);
  // Spin-resolved singles a^dag_{a s} a_{i s} and the opposite-spin doubles
  // a^dag_{a up} a^dag_{b dn} a_{j dn} a_{i up}.
  static ExcitationBasis spin_resolved(const std::vector<int> &occ, const std::vector<int> &vir,
                                       int n_orb);
  // Projects 4-qubit operators onto the 2-qubit two-orbital encoding.
  ExcitationBasis encode_two_orbital() const;
  std::size_t size() const { return ops.size(); }
};

struct QeomMatrices {
  CMat m, q, v, w;

  CMat hamiltonian_block() const;  // [[M, Q], [Q*, M*]]
  CMat metric_block() const;       // [[V, W], [-W*, -V*]]
};

// [A, B, C] = ([[A, B], C] + [A, [B, C]]) / 2
PauliSum triple_commutator(const PauliSum &a, const PauliSum &b, const PauliSum &c);

QeomMatrices build_matrices(const QuantumState &state, const ExcitationBasis &basis,
                            const PauliSum &h, const SamplingOptions &opt = {});

struct QeomSolution {
  std::vector<double> energies;  // ascending excitation energies
  double metric_condition = 0.0;
  double metric_determinant = 0.0;
  double max_imag = 0.0;  // largest dropped imaginary part
};

QeomSolution solve(const QeomMatrices &qm, double max_condition = 1e8);
double metric_determinant(const QeomMatrices &qm);

}  // namespace iaoq
