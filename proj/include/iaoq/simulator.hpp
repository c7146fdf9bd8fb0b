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
#include <vector>

#include "iaoq/circuit.hpp"
#include "iaoq/pauli.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

/// Statevector (n <= 14) or density matrix (n <= 6).
class QuantumState {
 public:
  QuantumState() = default;

  static QuantumState basis(int n, std::uint64_t index);
  static QuantumState from_vector(const CVec &psi);
  static QuantumState from_density(const CMat &rho);

  int n_qubits() const { return n_; }
  bool is_pure() const { return pure_; }
  const CVec &vector() const;
  const CMat &density() const;
  // Density matrix for either representation.
  CMat density_matrix() const;
  QuantumState to_density() const;

  CVec &mutable_vector() { return psi_; }
  CMat &mutable_density() { return rho_; }

 private:
  int n_ = 0;
  bool pure_ = true;
  CVec psi_;
  CMat rho_;
};

struct NoiseModel {
  std::vector<double> p1_given_0;  // per-qubit readout flips 0 -> 1
  std::vector<double> p0_given_1;  // per-qubit readout flips 1 -> 0
  double damping = 0.0;            // amplitude damping per gate and qubit
  double dephasing = 0.0;          // phase-flip probability per gate and qubit
  double depolarizing = 0.0;       // two-qubit depolarizing after each CNOT

  static NoiseModel readout(int n, double p);
  bool has_gate_noise() const;
  bool has_readout() const;
  double flip(int q, int bit) const;
  void validate() const;
};

// Executes the circuit. Without gate noise the representation of `initial`
// is kept; with gate noise the state is promoted to a density matrix and
// channels follow every gate.
QuantumState run(const Circuit &c, const QuantumState &initial,
                 const NoiseModel *noise = nullptr);

// Exact <op>; op must be Hermitian within 1e-10.
double expectation(const QuantumState &state, const PauliSum &op);
cplx expectation(const QuantumState &state, const PauliString &p);

struct CountsHistogram {
  int n_qubits = 0;
  std::map<std::uint64_t, double> counts;

  double total() const;
  double probability(std::uint64_t outcome) const;
  // {"bitstring": count}, qubit 0 rightmost.
  std::string to_json() const;
  static CountsHistogram from_json(const std::string &text, int n_qubits);
};

// Measures every qubit in the basis given by the letters of `basis`
// (X, Y, Z; I measures Z). Readout flips from `noise` follow ideal sampling.
CountsHistogram sample(const QuantumState &state, const PauliString &basis,
                       int shots, std::uint64_t seed,
                       const NoiseModel *noise = nullptr);

struct CalibrationMatrix {
  int n_qubits = 0;
  Mat m;  // m(i, j) = P(measure i | prepared j)

  void validate() const;
};

// shots == 0 gives the exact readout model.
CalibrationMatrix build_calibration(const NoiseModel &noise, int n_qubits,
                                    int shots, std::uint64_t seed);

CountsHistogram mitigate(const CountsHistogram &counts,
                         const CalibrationMatrix &calib);

struct SamplingOptions {
  int shots = 0;  // 0 selects exact expectations
  std::uint64_t seed = 0;
  const NoiseModel *noise = nullptr;              // readout model
  const CalibrationMatrix *calibration = nullptr;  // mitigation when set
};

// Greedy qubit-wise commuting groups, in first-appearance order.
std::vector<std::vector<std::size_t>> group_qubitwise(
    const std::vector<PauliString> &strings);

// Real parts of <P> for Hermitian strings, sampled group by group.
std::vector<double> estimate_paulis(const QuantumState &state,
                                    const std::vector<PauliString> &strings,
                                    const SamplingOptions &opt);
double estimate(const QuantumState &state, const PauliSum &op,
                const SamplingOptions &opt);

// rho = sum_P <P> P / 2^n over all 4^n strings (n <= 3).
CMat qst(const QuantumState &state, const SamplingOptions &opt);

double purity(const CMat &rho);
double fidelity(const CMat &rho, std::uint64_t reference);

}  // namespace iaoq
