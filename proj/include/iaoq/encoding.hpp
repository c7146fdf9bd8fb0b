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

#include "iaoq/pauli.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

/**
 * Two spatial orbitals, one up and one down electron, on 2 qubits. Encoded
 * bit 0 places the up electron in orbital 1, bit 1 the down electron. With
 * the 4-qubit JW layout (up on qubits 0,1, down on 2,3) the HF determinant
 * is encoded as |00>.
 */
struct TwoOrbitalEncoding {
  static std::uint64_t decode_index(std::uint64_t k);
  // 16 x 4 isometry mapping encoded states to JW states.
  static CMat isometry();
  static CVec decode_state(const CVec &psi2);
  static CVec encode_state(const CVec &psi4, double tol = 1e-10);
  // V^dagger O V. Fails when O leaks out of the sector by more than tol.
  static PauliSum encode_operator(const PauliSum &op4, double tol = 1e-10);
};

}  // namespace iaoq
