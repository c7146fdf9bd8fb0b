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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iaoq/analysis.hpp"
#include "iaoq/bundle.hpp"
#include "iaoq/integrals.hpp"
#include "iaoq/pauli.hpp"
#include "iaoq/simulator.hpp"
#include "iaoq/vqe.hpp"

namespace iaoq {

struct FoldOptions {
  std::vector<int> frozen;           // core orbitals folded before selection
  std::string orbitals = "mo";       // bundle sources: mo | iao | iao-boys
  std::string selector = "full";     // full | hono-luno | hf-window(k)
  int n_active_elec = -1;            // -1 keeps every electron after freezing
  bool encode_two_orbital = true;    // 2-orbital 2-electron spaces on 2 qubits
};

/**
 * One grid point ready for a solver: the qubit Hamiltonian plus, when the
 * source carried integrals, the folded MOIntegrals it came from.
 */
struct Problem {
  double R = 0.0;
  std::string kind;  // bundle | fcidump | pauli
  std::optional<IntegralBundle> bundle;
  std::optional<MOIntegrals> mo;
  PauliSum h;
  int n_orb = 0;
  int n_elec = 0;
  bool two_orbital = false;
  std::uint64_t reference = 0;  // HF occupancy on the qubit register
  int n_qubits() const { return h.n_qubits(); }
};

MOIntegrals fold(const MOIntegrals &mo, const FoldOptions &opt);
Problem make_problem(const GridEntry &entry, const FoldOptions &opt);
// A grid directory, or a single bundle directory, FCIDUMP or Pauli text file.
std::vector<Problem> load_problems(const std::filesystem::path &input, const FoldOptions &opt);
std::uint64_t hf_reference(int n_orb, int n_elec);

struct NoiseConfig {
  double readout = 0.0;
  double damping = 0.0;
  double dephasing = 0.0;
  double depolarizing = 0.0;
  bool any() const { return readout > 0 || damping > 0 || dephasing > 0 || depolarizing > 0; }
};

struct MethodOptions {
  std::string method = "fci";  // fci | vqe | qite | qeom | vqse
  std::string ansatz = "so4";
  int depth = 1;
  std::string optimizer = "bfgs";  // bfgs | gradient-descent
  int max_iter = 500;
  int shots = 0;
  std::optional<std::uint64_t> seed;
  NoiseConfig noise;
  bool mitigate = false;
  int calibration_shots = 0;  // 0 builds the analytic calibration matrix
  double dtau = 0.5;
  double beta = 7.0;
  bool first_order = false;
  std::string qeom_basis = "spin-resolved";  // spin-resolved | spin-summed
  std::string qeom_state = "fci";            // fci | vqe
  bool vqse_singles = true;
  bool vqse_doubles = true;
  bool vqse_active_only = false;
  int vqse_repeats = 10;
  double vqse_threshold = 1e-8;  // relative overlap cutoff in the pencil solve
  // Collects every violation; empty when valid.
  std::vector<std::string> violations() const;
};

struct PointResult {
  double R = 0.0;
  double energy = 0.0;
  double sigma = 0.0;
  double reference_energy = 0.0;  // FCI on the same Hamiltonian
  std::vector<double> excitations;
  double metric_determinant = 0.0;
  double metric_condition = 0.0;
  int evaluations = 0;
  int cnots = 0;
  std::string detail_json;  // method-specific payload
};

PointResult run_method(const Problem &problem, const MethodOptions &opt);

struct ScanResult {
  PESCurve curve;
  std::vector<PointResult> points;
};

ScanResult scan(const std::vector<Problem> &problems, const MethodOptions &opt);

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path output = "out";
  FoldOptions fold;
  MethodOptions method;
};

// Parses a JSON config; throws Error(Config) listing every violation.
RunConfig parse_config(const std::string &json_text);

// Ground state of a problem from the exact oracle.
QuantumState ground_state(const Problem &problem);

}  // namespace iaoq
