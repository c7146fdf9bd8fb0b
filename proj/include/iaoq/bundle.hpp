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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "iaoq/integrals.hpp"
#include "iaoq/types.hpp"

namespace iaoq {

struct GeometryRecord {
  std::vector<std::string> elements;
  std::vector<std::array<double, 3>> coords_angstrom;
  double R = 0.0;
  std::string basis_b1;
  std::string basis_b2;
};

/**
 * AO-basis integral data for one geometry: the large basis B1, the
 * reference minimal basis B2 and their overlaps, plus converged MOs.
 */
struct IntegralBundle {
  int n_b1 = 0;
  int n_b2 = 0;
  Mat s1;
  Mat s12;
  Mat s2;
  Mat hcore;
  PackedEri eri;
  std::array<Mat, 3> dipole;
  Mat mo_coeff;
  int n_occ = 0;
  double e_nuc = 0.0;
  GeometryRecord meta;

  // Checks every invariant; throws Error naming the offending field.
  void validate() const;
  Mat occupied() const { return mo_coeff.leftCols(n_occ); }
};

IntegralBundle load_bundle(const std::filesystem::path &dir);
void save_bundle(const IntegralBundle &bundle,
                 const std::filesystem::path &dir);

MOIntegrals load_fcidump(const std::filesystem::path &path);
void write_fcidump(const MOIntegrals &mo, const std::filesystem::path &path);

struct GridEntry {
  double R = 0.0;
  std::filesystem::path path;
  std::string kind;  // bundle | fcidump | pauli
};

// Reads <dir>/grid.json; paths are resolved relative to dir and R must be
// strictly increasing.
std::vector<GridEntry> load_grid(const std::filesystem::path &dir);
void save_grid(const std::vector<GridEntry> &entries,
               const std::filesystem::path &dir);

std::uint32_t crc32_of(const void *data, std::size_t size);

}  // namespace iaoq
