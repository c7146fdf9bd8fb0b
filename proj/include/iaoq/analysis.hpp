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

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "iaoq/integrals.hpp"
#include "iaoq/pauli.hpp"
#include "iaoq/simulator.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

// Maps a JW operator on 2 n_orb qubits to the qubits the state lives on.
using OperatorEncoder = std::function<PauliSum(const PauliSum &)>;

/**
 * rdm1[s](p, r) = <X^s_pr>, rdm2 for spins (s, t) at ((p n + r) n + q) n + s
 * holds <X^s_pr X^t_qs> - delta_qr delta_st <X^s_ps>.
 */
struct RDMPair {
  int n_orb = 0;
  std::array<Mat, 2> rdm1;
  std::array<std::vector<double>, 4> rdm2;  // index 2 s + t
  double asymmetry = 0.0;  // largest Hermiticity defect removed by averaging
  double max_imag = 0.0;   // largest discarded imaginary part

  double two(int s, int t, int p, int r, int q, int u) const;
  Mat spin_summed_rdm1() const;
  // sum_{s t} rho^{st}_{prqs}.
  std::vector<double> spin_summed_rdm2() const;
};

RDMPair measure_rdms(const QuantumState &state, int n_orb, const SamplingOptions &opt = {},
                     const OperatorEncoder &encode = {});

double energy_from_rdms(const RDMPair &rdms, const MOIntegrals &mo);

double s_squared(const QuantumState &state, int n_orb, const SamplingOptions &opt = {},
                 const OperatorEncoder &encode = {});

struct PESCurve {
  std::string method;
  std::vector<double> r;      // Angstrom, strictly increasing
  std::vector<double> e;      // Hartree
  std::vector<double> sigma;  // optional, empty or same length

  void validate() const;
  std::string to_csv() const;
  static PESCurve from_csv(const std::string &text, const std::string &method = "");
};

struct FitResult {
  double r_eq = 0.0;
  double e_min = 0.0;
  double delta_e = 0.0;  // E(largest R) - E_min
};

// Quartic least-squares fit over the 5 points nearest the discrete minimum.
FitResult fit_equilibrium(const PESCurve &curve);

double mean_deviation(const PESCurve &a, const PESCurve &b);

}  // namespace iaoq
