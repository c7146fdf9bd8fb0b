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
#include <string>
#include <vector>

#include "iaoq/analysis.hpp"
#include "iaoq/integrals.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

/**
 * Two-electron reference in the first n_active orbitals of an orthonormal
 * full basis. rdm1 and rdm2 are spin-summed active-space density matrices,
 * rdm2 at ((p n + r) n + q) n + s for sum_{st} <a+_ps a+_qt a_st a_rs>.
 */
struct VqseProblem {
  int n_full = 0;
  int n_active = 0;
  double e0 = 0.0;
  std::vector<double> t;  // compact two-body tensor, full basis, n^4
  Mat rdm1;
  std::vector<double> rdm2;
  int n_elec = 2;

  void validate() const;
  // Completes the active columns (full-basis coefficients) to an orthonormal
  // basis, rotates the integrals and absorbs the one-body part.
  static VqseProblem from_integrals(const MOIntegrals &full, const Mat &active,
                                    const Mat &rdm1, const std::vector<double> &rdm2);
};

// T_EFGH = (EF|GH)/2 + (d_GH h_EF + d_EF h_GH) / (2 (N - 1)).
std::vector<double> absorb_one_body(const Mat &h, const PackedEri &eri, int n_elec = 2);

struct VqseOptions {
  bool singles = true;
  bool doubles = true;
  bool active_only = false;  // restrict created orbitals to the active space
};

// Expansion operator: singles E_Pr, doubles E_TuVw with (T,u) <= (V,w).
struct VqseOperator {
  int kind = 0;  // 0 identity, 1 single, 2 double
  int p = 0, r = 0, q = 0, s = 0;  // (P, r) or (T, u, V, w)
};

std::vector<VqseOperator> vqse_operators(const VqseProblem &problem, const VqseOptions &opt);

struct VqseMatrices {
  Mat h, s;
  std::vector<VqseOperator> ops;
};

VqseMatrices build_forms(const VqseProblem &problem, const VqseOptions &opt = {});

// Lowest eigenvalue of H v = E S v after canonical orthogonalization.
double solve(const VqseMatrices &vm, double threshold = 1e-8);

struct VqseStatistics {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> samples;
};

// Re-measures the active RDMs n_repeats times with shot noise and re-solves
// each sample with the given relative overlap threshold.
VqseStatistics sample_statistics(const VqseProblem &problem, const QuantumState &state,
                                 int n_repeats, int shots, std::uint64_t seed,
                                 const NoiseModel *noise = nullptr,
                                 const OperatorEncoder &encode = {},
                                 const VqseOptions &opt = {}, double threshold = 1e-8);

}  // namespace iaoq
