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
#include <functional>
#include <string>
#include <vector>

#include "iaoq/circuit.hpp"
#include "iaoq/pauli.hpp"
#include "iaoq/simulator.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

struct QiteConfig {
  double dtau = 0.5;        // inverse Hartree
  double beta_total = 7.0;  // inverse Hartree
  std::vector<PauliString> basis;  // empty -> all non-identity strings
  bool trotterize = false;  // evolve Pauli terms of H one at a time
  bool first_order = false; // linearized target instead of exp(-dtau h)
  bool compact = true;      // KAK-compact the accumulated 2-qubit unitary
  double regularization = 1e-8;
  double residual_threshold = 1e-6;
  int shots = 0;  // 0 selects exact expectations
  std::uint64_t seed = 0;
  const NoiseModel *noise = nullptr;
  const CalibrationMatrix *calibration = nullptr;

  void validate(int n_qubits) const;
  int n_steps() const;
};

std::vector<PauliString> all_pauli_strings(int n, bool include_identity = false);

// Expectation of a Hermitian Pauli string on the current state.
using PauliOracle = std::function<double(const PauliString &)>;

struct QiteStepResult {
  Vec x;              // step unitary exp(i sum_mu x_mu P_mu)
  CMat unitary;
  double residual = 0.0;
  bool flagged = false;
};

// Strings whose expectations a step needs.
std::vector<PauliString> qite_required_strings(const PauliSum &h_term, double dtau,
                                               const std::vector<PauliString> &basis,
                                               bool first_order);

QiteStepResult qite_solve(const PauliOracle &expval, const PauliSum &h_term, double dtau,
                          const std::vector<PauliString> &basis, bool first_order = false,
                          double regularization = 1e-8, double residual_threshold = 1e-6);

// One step on a pure state with exact expectations.
std::pair<QiteStepResult, QuantumState> qite_step(const QuantumState &state,
                                                  const PauliSum &h_term, double dtau,
                                                  const std::vector<PauliString> &basis,
                                                  bool first_order = false);

struct QiteStep {
  double beta = 0.0;
  double energy = 0.0;
  double x_norm = 0.0;
  double residual = 0.0;
  bool flagged = false;
  int cnots = 0;
  bool general = false;  // KAK needed the 3-CNOT fallback
};

struct QiteTrace {
  std::vector<QiteStep> steps;
  CMat unitary;  // accumulated over all steps
  Circuit circuit;  // compacted circuit when available
  QuantumState state;

  double final_energy() const { return steps.back().energy; }
  std::string to_csv() const;
};

QiteTrace qite_run(const PauliSum &h, const QuantumState &initial, const QiteConfig &cfg);

// exp(i G) for a Hermitian G.
CMat exp_i_hermitian(const CMat &g);

}  // namespace iaoq
