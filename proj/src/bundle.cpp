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

#include "iaoq/bundle.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "iaoq/error.hpp"

namespace iaoq {

namespace fs = std::filesystem;
using json = nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "bundle blobs are little-endian and read without byte swapping");

std::uint32_t crc32_of(const void *data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  const auto *bytes = static_cast<const Bytef *>(data);
  while (size > 0) {
    uInt chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, bytes, chunk);
    bytes += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

namespace {

json read_json(const fs::path &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    fail(ErrorKind::Io, path.string() + ": malformed JSON: " + e.what());
  }
}

const json &field(const json &j, const std::string &name) {
  if (!j.contains(name)) fail(ErrorKind::InvalidInput, name + ": missing field");
  return j.at(name);
}

template <typename T>
T get_field(const json &j, const std::string &name) {
  try {
    return field(j, name).get<T>();
  } catch (const json::exception &) {
    fail(ErrorKind::InvalidInput, name + ": wrong type");
  }
}

std::vector<double> read_blob(const fs::path &dir, const json &blobs,
                              const std::string &name,
                              const std::vector<std::size_t> &shape) {
  const json &b = field(blobs, name);
  auto file_shape = get_field<std::vector<std::size_t>>(b, "shape");
  if (file_shape != shape) {
    std::ostringstream msg;
    msg << name << ": dimension mismatch (shape [";
    for (std::size_t i = 0; i < file_shape.size(); ++i)
      msg << (i ? "," : "") << file_shape[i];
    msg << "] expected [";
    for (std::size_t i = 0; i < shape.size(); ++i)
      msg << (i ? "," : "") << shape[i];
    msg << "])";
    fail(ErrorKind::InvalidInput, msg.str());
  }
  std::size_t count = 1;
  for (auto s : shape) count *= s;
  fs::path path = dir / get_field<std::string>(b, "file");
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, name + ": cannot open " + path.string());
  std::vector<double> out(count);
  in.read(reinterpret_cast<char *>(out.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double) ||
      in.peek() != std::char_traits<char>::eof())
    fail(ErrorKind::InvalidInput, name + ": blob size does not match shape");
  if (b.contains("crc32")) {
    auto expected = b.at("crc32").get<std::uint32_t>();
    if (crc32_of(out.data(), count * sizeof(double)) != expected)
      fail(ErrorKind::InvalidInput, name + ": checksum mismatch");
  }
  return out;
}

// Blobs are row-major.
Mat to_matrix(const std::vector<double> &v, std::size_t rows, std::size_t cols,
              std::size_t offset = 0) {
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[offset + i * cols + j];
  return m;
}

json write_blob(const fs::path &dir, const std::string &name,
                const std::vector<double> &data,
                const std::vector<std::size_t> &shape) {
  std::string file = name + ".bin";
  std::ofstream out(dir / file, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + (dir / file).string());
  out.write(reinterpret_cast<const char *>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) fail(ErrorKind::Io, "write failed: " + (dir / file).string());
  return json{{"file", file},
              {"shape", shape},
              {"crc32", crc32_of(data.data(), data.size() * sizeof(double))}};
}

std::vector<double> row_major(const Mat &m) {
  std::vector<double> v(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      v[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return v;
}

void check_symmetric(const Mat &m, const std::string &name, double tol) {
  if (m.rows() != m.cols())
    fail(ErrorKind::InvalidInput, name + ": not square");
  if (m.size() > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > tol)
    fail(ErrorKind::InvalidInput, name + ": not symmetric");
}

void check_positive_definite(const Mat &m, const std::string &name) {
  check_symmetric(m, name, 1e-10);
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (!(lo > 1e-10)) {
    std::ostringstream msg;
    msg << name << ": overlap not positive definite (smallest eigenvalue "
        << lo << ")";
    fail(ErrorKind::InvalidInput, msg.str());
  }
}

}  // namespace

void IntegralBundle::validate() const {
  if (n_b1 <= 0) fail(ErrorKind::InvalidInput, "n_b1: must be positive");
  if (n_b2 <= 0 || n_b2 > n_b1)
    fail(ErrorKind::InvalidInput, "n_b2: must satisfy 0 < n_b2 <= n_b1");
  auto dims = [](const Mat &m, Eigen::Index r, Eigen::Index c,
                 const std::string &name) {
    if (m.rows() != r || m.cols() != c)
      fail(ErrorKind::InvalidInput, name + ": dimension mismatch");
  };
  dims(s1, n_b1, n_b1, "s1");
  dims(s12, n_b1, n_b2, "s12");
  dims(s2, n_b2, n_b2, "s2");
  dims(hcore, n_b1, n_b1, "hcore");
  for (int k = 0; k < 3; ++k) {
    dims(dipole[k], n_b1, n_b1, "dipole");
    check_symmetric(dipole[k], "dipole", 1e-10);
  }
  if (mo_coeff.rows() != n_b1 || mo_coeff.cols() < 1 || mo_coeff.cols() > n_b1)
    fail(ErrorKind::InvalidInput, "mo_coeff: dimension mismatch");
  if (eri.n() != static_cast<std::size_t>(n_b1))
    fail(ErrorKind::InvalidInput, "eri: dimension mismatch");
  if (n_occ < 0 || n_occ > mo_coeff.cols())
    fail(ErrorKind::InvalidInput, "n_occ: out of range");
  check_positive_definite(s1, "s1");
  check_positive_definite(s2, "s2");
  check_symmetric(hcore, "hcore", 1e-10);
  Mat g = mo_coeff.transpose() * s1 * mo_coeff;
  double dev = (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    std::ostringstream msg;
    msg << "mo_coeff: columns not orthonormal under s1 (max deviation " << dev
        << ")";
    fail(ErrorKind::InvalidInput, msg.str());
  }
  if (!std::isfinite(e_nuc)) fail(ErrorKind::InvalidInput, "e_nuc: not finite");
}

IntegralBundle load_bundle(const fs::path &dir) {
  if (!fs::is_directory(dir))
    fail(ErrorKind::Io, "bundle directory not found: " + dir.string());
  json m = read_json(dir / "manifest.json");
  if (get_field<std::string>(m, "format") != "iaoq-bundle")
    fail(ErrorKind::InvalidInput, "format: not an iaoq bundle");
  if (get_field<int>(m, "version") != 1)
    fail(ErrorKind::InvalidInput, "version: unsupported bundle version");

  IntegralBundle b;
  b.n_b1 = get_field<int>(m, "n_b1");
  b.n_b2 = get_field<int>(m, "n_b2");
  b.n_occ = get_field<int>(m, "n_occ");
  b.e_nuc = get_field<double>(m, "e_nuc");
  int n_mo = get_field<int>(m, "n_mo");
  if (b.n_b1 <= 0 || b.n_b2 <= 0 || n_mo <= 0)
    fail(ErrorKind::InvalidInput, "n_b1/n_b2/n_mo: must be positive");

  const json &meta = field(m, "meta");
  b.meta.elements = get_field<std::vector<std::string>>(meta, "elements");
  for (const auto &xyz :
       get_field<std::vector<std::vector<double>>>(meta, "coords_angstrom")) {
    if (xyz.size() != 3)
      fail(ErrorKind::InvalidInput, "coords_angstrom: expected 3 components");
    b.meta.coords_angstrom.push_back({xyz[0], xyz[1], xyz[2]});
  }
  b.meta.R = get_field<double>(meta, "R");
  b.meta.basis_b1 = get_field<std::string>(meta, "basis_b1");
  b.meta.basis_b2 = get_field<std::string>(meta, "basis_b2");

  const json &blobs = field(m, "blobs");
  const auto n1 = static_cast<std::size_t>(b.n_b1);
  const auto n2 = static_cast<std::size_t>(b.n_b2);
  b.s1 = to_matrix(read_blob(dir, blobs, "s1", {n1, n1}), n1, n1);
  b.s12 = to_matrix(read_blob(dir, blobs, "s12", {n1, n2}), n1, n2);
  b.s2 = to_matrix(read_blob(dir, blobs, "s2", {n2, n2}), n2, n2);
  b.hcore = to_matrix(read_blob(dir, blobs, "hcore", {n1, n1}), n1, n1);
  auto dip = read_blob(dir, blobs, "dipole", {3, n1, n1});
  for (std::size_t k = 0; k < 3; ++k)
    b.dipole[k] = to_matrix(dip, n1, n1, k * n1 * n1);
  const auto nmo = static_cast<std::size_t>(n_mo);
  b.mo_coeff = to_matrix(read_blob(dir, blobs, "mo_coeff", {n1, nmo}), n1, nmo);

  std::string layout = get_field<std::string>(m, "eri_layout");
  if (layout == "s8") {
    b.eri = PackedEri(n1);
    b.eri.data() = read_blob(dir, blobs, "eri", {PackedEri::packed_size(n1)});
  } else if (layout == "s1") {
    b.eri = PackedEri::from_dense(read_blob(dir, blobs, "eri", {n1, n1, n1, n1}),
                                  n1, 0.0);
  } else {
    fail(ErrorKind::InvalidInput, "eri_layout: expected s8 or s1");
  }
  b.validate();
  return b;
}

void save_bundle(const IntegralBundle &b, const fs::path &dir) {
  b.validate();
  fs::create_directories(dir);
  const auto n1 = static_cast<std::size_t>(b.n_b1);
  const auto n2 = static_cast<std::size_t>(b.n_b2);
  const auto nmo = static_cast<std::size_t>(b.mo_coeff.cols());
  std::vector<double> dip;
  for (const auto &d : b.dipole) {
    auto v = row_major(d);
    dip.insert(dip.end(), v.begin(), v.end());
  }
  json blobs;
  blobs["s1"] = write_blob(dir, "s1", row_major(b.s1), {n1, n1});
  blobs["s12"] = write_blob(dir, "s12", row_major(b.s12), {n1, n2});
  blobs["s2"] = write_blob(dir, "s2", row_major(b.s2), {n2, n2});
  blobs["hcore"] = write_blob(dir, "hcore", row_major(b.hcore), {n1, n1});
  blobs["eri"] = write_blob(dir, "eri", b.eri.data(), {b.eri.data().size()});
  blobs["dipole"] = write_blob(dir, "dipole", dip, {3, n1, n1});
  blobs["mo_coeff"] = write_blob(dir, "mo_coeff", row_major(b.mo_coeff), {n1, nmo});

  json coords = json::array();
  for (const auto &c : b.meta.coords_angstrom) coords.push_back(c);
  json m = {{"format", "iaoq-bundle"},
            {"version", 1},
            {"n_b1", b.n_b1},
            {"n_b2", b.n_b2},
            {"n_mo", nmo},
            {"n_occ", b.n_occ},
            {"e_nuc", b.e_nuc},
            {"eri_layout", "s8"},
            {"meta",
             {{"elements", b.meta.elements},
              {"coords_angstrom", coords},
              {"R", b.meta.R},
              {"basis_b1", b.meta.basis_b1},
              {"basis_b2", b.meta.basis_b2}}},
            {"blobs", blobs}};
  std::ofstream out(dir / "manifest.json");
  if (!out) fail(ErrorKind::Io, "cannot write manifest in " + dir.string());
  out << m.dump(1) << "\n";
}

namespace {

std::string upper(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Parses the namelist between &FCI and &END into KEY -> list of values.
std::map<std::string, std::vector<std::string>> parse_namelist(
    const std::string &text) {
  std::map<std::string, std::vector<std::string>> out;
  std::string key;
  std::string tok;
  auto flush = [&]() {
    if (tok.empty()) return;
    if (key.empty())
      fail(ErrorKind::InvalidInput, "FCIDUMP header: value without key: " + tok);
    out[key].push_back(tok);
    tok.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '=') {
      key = upper(tok);
      tok.clear();
      out[key];
    } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      tok.push_back(c);
    }
  }
  flush();
  return out;
}

template <typename T>
T parse_number(const std::string &s, const std::string &what) {
  T v{};
  const char *first = s.data();
  const char *last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    fail(ErrorKind::InvalidInput, "FCIDUMP: malformed " + what + ": " + s);
  return v;
}

double parse_real(std::string s) {
  for (auto &c : s)
    if (c == 'd' || c == 'D') c = 'e';
  return parse_number<double>(s, "value");
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

MOIntegrals load_fcidump(const fs::path &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  std::string header;
  bool started = false;
  bool ended = false;
  while (std::getline(in, line)) {
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        fail(ErrorKind::InvalidInput, "FCIDUMP: malformed header (missing &FCI)");
      }
      started = true;
      u = u.substr(pos + 4);
    }
    auto end = u.find("&END");
    if (end == std::string::npos) end = u.find('/');
    if (end != std::string::npos) {
      header += u.substr(0, end);
      ended = true;
      break;
    }
    header += u + " ";
  }
  if (!ended) fail(ErrorKind::InvalidInput, "FCIDUMP: malformed header (missing &END)");
  auto nl = parse_namelist(header);
  auto single_int = [&](const std::string &key) {
    auto it = nl.find(key);
    if (it == nl.end() || it->second.size() != 1)
      fail(ErrorKind::InvalidInput, "FCIDUMP: malformed header (" + key + ")");
    return parse_number<int>(it->second[0], key);
  };
  MOIntegrals mo;
  mo.n_orb = single_int("NORB");
  mo.n_elec = single_int("NELEC");
  int ms2 = nl.count("MS2") ? single_int("MS2") : 0;
  mo.restricted = (ms2 == 0);
  if (mo.n_orb <= 0) fail(ErrorKind::InvalidInput, "FCIDUMP: NORB must be positive");
  const auto n = static_cast<std::size_t>(mo.n_orb);
  mo.h = Mat::Zero(mo.n_orb, mo.n_orb);
  mo.eri = PackedEri(n);

  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string v, a, b, c, d;
    if (!(ls >> v)) continue;
    if (!(ls >> a >> b >> c >> d))
      fail(ErrorKind::InvalidInput, "FCIDUMP: malformed record: " + line);
    double val = parse_real(v);
    int i = parse_number<int>(a, "index");
    int j = parse_number<int>(b, "index");
    int k = parse_number<int>(c, "index");
    int l = parse_number<int>(d, "index");
    for (int x : {i, j, k, l})
      if (x < 0 || x > mo.n_orb)
        fail(ErrorKind::InvalidInput, "FCIDUMP: index out of range: " + line);
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      mo.e0 = val;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0)
        fail(ErrorKind::InvalidInput, "FCIDUMP: index out of range: " + line);
      mo.h(i - 1, j - 1) = val;
      mo.h(j - 1, i - 1) = val;
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0)
        fail(ErrorKind::InvalidInput, "FCIDUMP: index out of range: " + line);
      mo.eri.at(i - 1, j - 1, k - 1, l - 1) = val;
    }
  }
  mo.validate();
  return mo;
}

void write_fcidump(const MOIntegrals &mo, const fs::path &path) {
  mo.validate();
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  const int n = mo.n_orb;
  out << " &FCI NORB=" << n << ",NELEC=" << mo.n_elec << ",MS2=0,\n  ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (PackedEri::pair(i, j) < PackedEri::pair(k, l)) continue;
          double v = mo.eri(i, j, k, l);
          if (v == 0.0) continue;
          out << format_real(v) << " " << i + 1 << " " << j + 1 << " " << k + 1
              << " " << l + 1 << "\n";
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = mo.h(i, j);
      if (v == 0.0) continue;
      out << format_real(v) << " " << i + 1 << " " << j + 1 << " 0 0\n";
    }
  out << format_real(mo.e0) << " 0 0 0 0\n";
  if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

std::vector<GridEntry> load_grid(const fs::path &dir) {
  json g = read_json(dir / "grid.json");
  std::vector<GridEntry> out;
  for (const auto &e : field(g, "entries")) {
    GridEntry ge;
    ge.R = get_field<double>(e, "R");
    ge.path = dir / get_field<std::string>(e, "path");
    ge.kind = get_field<std::string>(e, "kind");
    if (ge.kind != "bundle" && ge.kind != "fcidump" && ge.kind != "pauli")
      fail(ErrorKind::InvalidInput, "kind: unknown grid entry kind " + ge.kind);
    if (!out.empty() && !(ge.R > out.back().R))
      fail(ErrorKind::InvalidInput, "R: grid values not strictly increasing");
    out.push_back(ge);
  }
  if (out.empty()) fail(ErrorKind::InvalidInput, "entries: empty grid");
  return out;
}

void save_grid(const std::vector<GridEntry> &entries, const fs::path &dir) {
  fs::create_directories(dir);
  json arr = json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && !(entries[i].R > entries[i - 1].R))
      fail(ErrorKind::InvalidInput, "R: grid values not strictly increasing");
    arr.push_back({{"R", entries[i].R},
                   {"path", entries[i].path.filename().string()},
                   {"kind", entries[i].kind}});
  }
  std::ofstream out(dir / "grid.json");
  if (!out) fail(ErrorKind::Io, "cannot write " + (dir / "grid.json").string());
  out << json{{"entries", arr}}.dump(1) << "\n";
}

}  // namespace iaoq
