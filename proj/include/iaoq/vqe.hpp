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
#include <utility>
#include <vector>

#include "iaoq/circuit.hpp"
#include "iaoq/pauli.hpp"
#include "iaoq/simulator.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

struct AnsatzSpec {
  enum class Kind { Ry, SO4, QUCCSD };

  Kind kind = Kind::SO4;
  int n_qubits = 2;
  int depth = 1;
  std::vector<std::pair<int, int>> pairs;  // SO4 pair set; empty -> linear chain
  std::vector<int> occupied;               // q-UCCSD spin-orbital qubits
  std::vector<int> virtuals;
  std::uint64_t reference = 0;             // HF occupancy bit pattern

  static Kind parse_kind(const std::string &s);
  void validate() const;
  int n_params() const;
  std::vector<std::pair<int, int>> pair_set() const;
};

// Spin-conserving single and double excitations as (annihilated, created)
// qubit lists, singles first then doubles, lexicographic.
std::vector<std::pair<std::vector<int>, std::vector<int>>> quccsd_excitations(
    const AnsatzSpec &spec);

// Circuit with every rotation bound to its parameter index.
Circuit ansatz_template(const AnsatzSpec &spec);
Circuit build_circuit(const AnsatzSpec &spec, const Vec &theta);

struct EvalOptions {
  int shots = 0;  // 0 selects the exact expectation
  std::uint64_t seed = 0;
  const NoiseModel *noise = nullptr;
  const CalibrationMatrix *calibration = nullptr;
};

/**
 * Energy and parameter-shift gradient of one ansatz and Hamiltonian.
 * Sampled evaluations draw seed derive_seed(seed, k) for the k-th call.
 */
class EnergyEvaluator {
 public:
  EnergyEvaluator(AnsatzSpec spec, PauliSum h, EvalOptions opt = {});

  double energy(const Vec &theta);
  double energy(const Circuit &c);
  QuantumState state(const Vec &theta) const;
  // dE/dtheta = sum over bound slots of scale * [E(+pi/2) - E(-pi/2)] / 2.
  Vec gradient(const Vec &theta);

  const AnsatzSpec &spec() const { return spec_; }
  const PauliSum &hamiltonian() const { return h_; }
  long evaluations() const { return evaluations_; }

 private:
  AnsatzSpec spec_;
  PauliSum h_;
  EvalOptions opt_;
  Circuit template_;
  long evaluations_ = 0;
};

struct TraceEntry {
  double energy = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct VQEResult {
  double energy = 0.0;
  Vec parameters;
  std::vector<TraceEntry> trace;
  bool converged = false;
  long evaluations = 0;
  QuantumState state;

  std::string to_json() const;
};

struct LineSearch {
  int grid_points = 21;
  double lambda_max = 2.0;
  double tol = 1e-4;
};

using Objective = std::function<double(const Vec &)>;
using Gradient = std::function<Vec(const Vec &)>;

// theta <- theta - lambda* g, lambda* from a grid scan refined by golden
// section. Stops when |dE| < tol or after max_iter iterations.
VQEResult gradient_descent(const Objective &f, const Gradient &g, Vec theta0,
                           const LineSearch &ls = {}, int max_iter = 200,
                           double tol = 1e-10);
// BFGS with backtracking line search.
VQEResult bfgs(const Objective &f, const Gradient &g, Vec theta0,
               int max_iter = 500, double gtol = 1e-9);

VQEResult gradient_descent(EnergyEvaluator &ev, Vec theta0, const LineSearch &ls = {},
                           int max_iter = 200, double tol = 1e-10);
VQEResult minimize_exact(EnergyEvaluator &ev, Vec theta0, int max_iter = 500,
                         double gtol = 1e-9);

}  // namespace iaoq
