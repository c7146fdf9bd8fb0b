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

#include "iaoq/encoding.hpp"

#include "iaoq/error.hpp"

namespace iaoq {

std::uint64_t TwoOrbitalEncoding::decode_index(std::uint64_t k) {
  if (k > 3) fail(ErrorKind::InvalidInput, "encoding: index out of range");
  const std::uint64_t up = (k & 1) ? 1u << 1 : 1u << 0;
  const std::uint64_t down = (k & 2) ? 1u << 3 : 1u << 2;
  return up | down;
}

CMat TwoOrbitalEncoding::isometry() {
  CMat v = CMat::Zero(16, 4);
  for (std::uint64_t k = 0; k < 4; ++k)
    v(static_cast<Eigen::Index>(decode_index(k)), static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

CVec TwoOrbitalEncoding::decode_state(const CVec &psi2) {
  if (psi2.size() != 4) fail(ErrorKind::InvalidInput, "encoding: expected a 2-qubit state");
  return isometry() * psi2;
}

CVec TwoOrbitalEncoding::encode_state(const CVec &psi4, double tol) {
  if (psi4.size() != 16) fail(ErrorKind::InvalidInput, "encoding: expected a 4-qubit state");
  const CMat v = isometry();
  CVec out = v.adjoint() * psi4;
  if ((psi4 - v * out).norm() > tol)
    fail(ErrorKind::InvalidInput, "encoding: state has weight outside the sector");
  return out;
}

PauliSum TwoOrbitalEncoding::encode_operator(const PauliSum &op4, double tol) {
  if (op4.n_qubits() != 4) fail(ErrorKind::InvalidInput, "encoding: expected a 4-qubit operator");
  const CMat v = isometry();
  const CMat o = op4.to_dense();
  const CMat ov = o * v;
  if ((ov - v * (v.adjoint() * ov)).cwiseAbs().maxCoeff() > tol)
    fail(ErrorKind::InvalidInput, "encoding: operator does not preserve the sector");
  return PauliSum::from_dense(v.adjoint() * ov).simplified(1e-14);
}

}  // namespace iaoq
