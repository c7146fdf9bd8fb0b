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

#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "iaoq/bundle.hpp"
#include "iaoq/error.hpp"
#include "iaoq/fci.hpp"
#include "iaoq/orbital_space.hpp"
#include "support.hpp"

using namespace iaoq;
using namespace iaoq::testing;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

IntegralBundle hydrogen_atom() {
  IntegralBundle b;
  b.n_b1 = b.n_b2 = 1;
  b.s1 = b.s2 = b.s12 = Mat::Identity(1, 1);
  b.hcore = Mat::Constant(1, 1, -0.5);
  b.eri = PackedEri(1);
  b.eri.at(0, 0, 0, 0) = 0.625;
  for (auto &d : b.dipole) d = Mat::Zero(1, 1);
  b.mo_coeff = Mat::Identity(1, 1);
  b.n_occ = 0;
  b.meta.elements = {"H"};
  b.meta.coords_angstrom = {{0.0, 0.0, 0.0}};
  b.meta.basis_b1 = b.meta.basis_b2 = "custom";
  return b;
}

fs::path scratch(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("iaoq_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string error_text(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal hydrogen bundle loads", "[bundle]") {
  const fs::path dir = scratch("h_atom");
  save_bundle(hydrogen_atom(), dir);
  const IntegralBundle b = load_bundle(dir);
  CHECK(b.n_b1 == 1);
  CHECK(b.hcore(0, 0) == -0.5);
  CHECK(b.eri(0, 0, 0, 0) == 0.625);
}

TEST_CASE("save then load is the identity on every field", "[bundle]") {
  const fs::path dir = scratch("roundtrip");
  const IntegralBundle a = load_bundle(fixture("h2_ccpvdz/r0.74"));
  save_bundle(a, dir);
  const IntegralBundle b = load_bundle(dir);
  CHECK(a.s1 == b.s1);
  CHECK(a.s12 == b.s12);
  CHECK(a.s2 == b.s2);
  CHECK(a.hcore == b.hcore);
  CHECK(a.eri.data() == b.eri.data());
  for (int k = 0; k < 3; ++k) CHECK(a.dipole[k] == b.dipole[k]);
  CHECK(a.mo_coeff == b.mo_coeff);
  CHECK(a.n_occ == b.n_occ);
  CHECK(a.e_nuc == b.e_nuc);
  CHECK(a.meta.R == b.meta.R);
  CHECK(a.meta.elements == b.meta.elements);
}

TEST_CASE("non positive definite overlap is rejected", "[bundle]") {
  IntegralBundle b = hydrogen_atom();
  b.s1(0, 0) = -0.1;
  CHECK_THAT(error_text([&] { b.validate(); }), ContainsSubstring("overlap not positive definite"));
}

TEST_CASE("validation names the offending field", "[bundle]") {
  IntegralBundle b = hydrogen_atom();
  b.hcore = Mat::Zero(2, 2);
  CHECK_THAT(error_text([&] { b.validate(); }), ContainsSubstring("hcore"));
  b = hydrogen_atom();
  b.mo_coeff(0, 0) = 2.0;
  CHECK_THAT(error_text([&] { b.validate(); }), ContainsSubstring("mo_coeff"));
}

TEST_CASE("broken ERI symmetry is rejected", "[bundle]") {
  std::vector<double> dense(16, 0.1);
  dense[1] = 0.2;  // (00|01) differs from (00|10)
  CHECK_THAT(error_text([&] { PackedEri::from_dense(dense, 2, 0.0); }), ContainsSubstring("eri"));
}

TEST_CASE("missing field and checksum mismatch are reported", "[bundle]") {
  const fs::path dir = scratch("corrupt");
  save_bundle(hydrogen_atom(), dir);
  nlohmann::json m;
  std::ifstream(dir / "manifest.json") >> m;
  m["blobs"]["hcore"]["crc32"] = 1234;
  std::ofstream(dir / "manifest.json") << m.dump();
  CHECK_THAT(error_text([&] { load_bundle(dir); }), ContainsSubstring("hcore: checksum mismatch"));
  m.erase("e_nuc");
  std::ofstream(dir / "manifest.json") << m.dump();
  CHECK_THAT(error_text([&] { load_bundle(dir); }), ContainsSubstring("e_nuc: missing field"));
}

TEST_CASE("committed H2/STO-6G fixture at 0.74 loads", "[bundle]") {
  const IntegralBundle b = load_bundle(fixture("h2_sto6g/r0.74"));
  CHECK(b.n_b1 == 2);
  CHECK(b.n_occ == 1);
  const auto grid = load_grid(fixture("h2_sto6g"));
  CHECK(grid.size() == 15);
  CHECK(grid.front().R == 0.3);
  CHECK(grid.back().R == 3.0);
}

TEST_CASE("every committed bundle validates", "[bundle]") {
  for (const char *g : {"h2_sto6g", "h2_ccpvdz"})
    for (const auto &e : load_grid(fixture(g))) CHECK_NOTHROW(load_bundle(e.path));
  CHECK_NOTHROW(load_bundle(fixture("nh3_ccpvdz")));
}

TEST_CASE("FCIDUMP echo of a one-orbital system", "[bundle]") {
  const fs::path p = scratch("one.fcidump");
  std::ofstream(p) << "&FCI NORB=1,NELEC=1,MS2=1,\n ORBSYM=1,\n ISYM=1,\n&END\n"
                   << "0.625 1 1 1 1\n-0.5 1 1 0 0\n0.0 0 0 0 0\n";
  const MOIntegrals mo = load_fcidump(p);
  CHECK(mo.n_orb == 1);
  CHECK(mo.h(0, 0) == -0.5);
  CHECK(mo.eri(0, 0, 0, 0) == 0.625);
  CHECK(mo.e0 == 0.0);
}

TEST_CASE("FCIDUMP round trip is bit identical", "[bundle]") {
  std::mt19937_64 rng(11);
  for (int n : {1, 2, 4}) {
    const MOIntegrals mo = random_integrals(n, 2, rng);
    const fs::path p = scratch("rt" + std::to_string(n) + ".fcidump");
    write_fcidump(mo, p);
    const MOIntegrals back = load_fcidump(p);
    CHECK(back.n_orb == n);
    CHECK(back.n_elec == 2);
    CHECK(back.e0 == mo.e0);
    CHECK(back.h == mo.h);
    CHECK(back.eri.data() == mo.eri.data());
  }
}

TEST_CASE("FCIDUMP index out of range is an error", "[bundle]") {
  const fs::path p = scratch("bad.fcidump");
  std::ofstream(p) << "&FCI NORB=1,NELEC=2,\n&END\n0.5 2 1 0 0\n";
  CHECK_THAT(error_text([&] { load_fcidump(p); }), ContainsSubstring("index out of range"));
  std::ofstream(p) << "NORB=1\n0.5 1 1 0 0\n";
  CHECK_THAT(error_text([&] { load_fcidump(p); }), ContainsSubstring("malformed header"));
}

TEST_CASE("folded H2/STO-6G FCI point through FCIDUMP", "[bundle]") {
  const IntegralBundle b = load_bundle(fixture("h2_sto6g/r0.74"));
  const MOIntegrals mo = ao2mo(b, b.mo_coeff);
  const fs::path p = scratch("h2.fcidump");
  write_fcidump(mo, p);
  // Frozen from an independent PySCF FCI run on the same fixture.
  CHECK_THAT(fci(load_fcidump(p), 2).ground_energy(),
             Catch::Matchers::WithinAbs(-1.1459398103, 1e-8));
}
