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

#include "iaoq/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "iaoq/encoding.hpp"
#include "iaoq/error.hpp"
#include "iaoq/fci.hpp"
#include "iaoq/iao.hpp"
#include "iaoq/orbital_space.hpp"
#include "iaoq/qeom.hpp"
#include "iaoq/qite.hpp"
#include "iaoq/rng.hpp"
#include "iaoq/vqse.hpp"

namespace iaoq {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string read_text(const fs::path &p) {
  std::ifstream in(p);
  if (!in) fail(ErrorKind::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Mat orbital_coefficients(const IntegralBundle &b, const std::string &orbitals) {
  if (orbitals == "mo") return b.mo_coeff;
  IAOBasis iao = lowdin_orthonormalize(build_iao(b), b.s1);
  if (orbitals == "iao") return iao.coeff;
  if (orbitals == "iao-boys") return boys_localize(iao, b.dipole, b.s1).basis.coeff;
  fail(ErrorKind::Config, "orbitals: expected mo, iao or iao-boys, got " + orbitals);
}

void attach_hamiltonian(Problem &p, const FoldOptions &opt) {
  const MOIntegrals &mo = *p.mo;
  p.n_orb = mo.n_orb;
  p.n_elec = mo.n_elec;
  if (opt.encode_two_orbital && mo.n_orb == 2 && mo.n_elec == 2) {
    p.h = TwoOrbitalEncoding::encode_operator(map_hamiltonian(mo));
    p.two_orbital = true;
    p.reference = 0;
  } else if (2 * mo.n_orb <= 14) {
    p.h = map_hamiltonian(mo);
    p.reference = hf_reference(mo.n_orb, mo.n_elec);
  }
}

NoiseModel make_noise(const NoiseConfig &c, int n) {
  NoiseModel m = NoiseModel::readout(n, c.readout);
  m.damping = c.damping;
  m.dephasing = c.dephasing;
  m.depolarizing = c.depolarizing;
  m.validate();
  return m;
}

// Sampling context owning the noise model and calibration for one point.
struct Sampling {
  NoiseModel noise;
  CalibrationMatrix calib;
  bool noisy = false;
  bool mitigated = false;
  Sampling(const MethodOptions &opt, int n) {
    noisy = opt.noise.any();
    if (noisy) noise = make_noise(opt.noise, n);
    if (opt.mitigate) {
      calib = build_calibration(noise, n, opt.calibration_shots,
                                derive_seed(opt.seed.value_or(0), 0xca1bull));
      mitigated = true;
    }
  }
  const NoiseModel *noise_ptr() const { return noisy ? &noise : nullptr; }
  const CalibrationMatrix *calib_ptr() const { return mitigated ? &calib : nullptr; }
};

void require_qubits(const Problem &p, const std::string &method) {
  if (p.h.n_qubits() == 0)
    fail(ErrorKind::InvalidInput, method + ": problem exceeds the 14-qubit budget");
}

AnsatzSpec make_spec(const Problem &p, const MethodOptions &opt) {
  AnsatzSpec spec;
  spec.kind = AnsatzSpec::parse_kind(opt.ansatz);
  spec.n_qubits = p.n_qubits();
  spec.depth = opt.depth;
  spec.reference = p.reference;
  if (spec.kind == AnsatzSpec::Kind::QUCCSD) {
    if (p.two_orbital || !p.mo)
      fail(ErrorKind::Config, "ansatz: quccsd needs the full Jordan-Wigner register");
    for (int q = 0; q < spec.n_qubits; ++q)
      ((p.reference >> q) & 1 ? spec.occupied : spec.virtuals).push_back(q);
  }
  spec.validate();
  return spec;
}

double oracle_energy(const Problem &p) {
  if (p.mo) return fci(*p.mo, p.mo->n_elec, 0).ground_energy();
  return fci(p.h).ground_energy();
}

VQEResult optimize(EnergyEvaluator &ev, const MethodOptions &opt) {
  Vec theta0 = Vec::Zero(ev.spec().n_params());
  if (opt.optimizer == "bfgs") return minimize_exact(ev, theta0, opt.max_iter);
  return gradient_descent(ev, theta0, LineSearch{}, opt.max_iter);
}

ExcitationBasis qeom_basis(const Problem &p, const MethodOptions &opt) {
  const int n = p.two_orbital ? 2 : p.n_orb;
  const int nocc = p.two_orbital ? 1 : p.n_elec / 2;
  std::vector<int> occ, vir;
  for (int i = 0; i < n; ++i) (i < nocc ? occ : vir).push_back(i);
  ExcitationBasis b = opt.qeom_basis == "spin-summed" ? ExcitationBasis::spin_summed(occ, vir, n)
                                                      : ExcitationBasis::spin_resolved(occ, vir, n);
  return p.two_orbital ? b.encode_two_orbital() : b;
}

PointResult run_vqse(const Problem &p, const MethodOptions &opt) {
  if (!p.bundle) fail(ErrorKind::InvalidInput, "vqse: needs an integral bundle source");
  const IntegralBundle &b = *p.bundle;
  if (b.n_occ != 1) fail(ErrorKind::InvalidInput, "vqse: only two-electron references are supported");
  const MOIntegrals full = ao2mo(b, b.mo_coeff);
  const Mat iao = lowdin_orthonormalize(build_iao(b), b.s1).coeff;
  const MOIntegrals act = ao2mo(b, iao);
  if (2 * act.n_orb > 14) fail(ErrorKind::InvalidInput, "vqse: active space exceeds the qubit budget");
  const Mat a = b.mo_coeff.transpose() * b.s1 * iao;
  const QuantumState psi = QuantumState::from_vector(fci(act, 2, 0).state(0));
  const RDMPair rd = measure_rdms(psi, act.n_orb);
  VqseProblem vp =
      VqseProblem::from_integrals(full, a, rd.spin_summed_rdm1(), rd.spin_summed_rdm2());
  VqseOptions vo{opt.vqse_singles, opt.vqse_doubles, opt.vqse_active_only};
  PointResult r;
  r.reference_energy = fci(full, 2, 0).ground_energy();
  if (opt.shots > 0) {
    Sampling smp(opt, 2 * act.n_orb);
    VqseStatistics st = sample_statistics(vp, psi, opt.vqse_repeats, opt.shots, *opt.seed,
                                          smp.noise_ptr(), {}, vo, opt.vqse_threshold);
    r.energy = st.mean;
    r.sigma = st.std_error;
    r.detail_json = ojson{{"samples", st.samples}}.dump();
  } else {
    const VqseMatrices vm = build_forms(vp, vo);
    r.energy = solve(vm, opt.vqse_threshold);
    r.detail_json = ojson{{"dimension", vm.ops.size()}}.dump();
  }
  return r;
}

}  // namespace

std::uint64_t hf_reference(int n_orb, int n_elec) {
  if (n_elec < 0 || n_elec % 2 != 0 || n_elec / 2 > n_orb)
    fail(ErrorKind::InvalidInput, "reference: needs an even electron count that fits the orbitals");
  const std::uint64_t occ = (std::uint64_t{1} << (n_elec / 2)) - 1;
  return occ | (occ << n_orb);
}

MOIntegrals fold(const MOIntegrals &mo, const FoldOptions &opt) {
  MOIntegrals m = opt.frozen.empty() ? mo : freeze_core(mo, opt.frozen);
  const int nae = opt.n_active_elec < 0 ? m.n_elec : opt.n_active_elec;
  return make_active_space(m, Selector::parse(opt.selector), nae).first;
}

Problem make_problem(const GridEntry &entry, const FoldOptions &opt) {
  Problem p;
  p.R = entry.R;
  p.kind = entry.kind;
  if (entry.kind == "bundle") {
    p.bundle = load_bundle(entry.path);
    p.mo = fold(ao2mo(*p.bundle, orbital_coefficients(*p.bundle, opt.orbitals)), opt);
    attach_hamiltonian(p, opt);
  } else if (entry.kind == "fcidump") {
    p.mo = fold(load_fcidump(entry.path), opt);
    attach_hamiltonian(p, opt);
  } else if (entry.kind == "pauli") {
    p.h = PauliSum::from_text(read_text(entry.path));
    if (!p.h.is_hermitian(1e-10)) fail(ErrorKind::InvalidInput, "pauli: Hamiltonian is not Hermitian");
    p.two_orbital = p.h.n_qubits() == 2;
    p.n_orb = p.two_orbital ? 2 : p.h.n_qubits() / 2;
    p.n_elec = p.two_orbital ? 2 : 0;
  } else {
    fail(ErrorKind::InvalidInput, "kind: unknown grid entry kind " + entry.kind);
  }
  return p;
}

std::vector<Problem> load_problems(const fs::path &input, const FoldOptions &opt) {
  std::vector<GridEntry> entries;
  if (fs::is_directory(input) && fs::exists(input / "grid.json")) {
    entries = load_grid(input);
  } else if (fs::is_directory(input)) {
    entries.push_back({0.0, input, "bundle"});
  } else if (fs::exists(input)) {
    const std::string text = read_text(input);
    const bool fcidump = text.find("&FCI") != std::string::npos;
    double r = 0.0;
    // A single file taken from a grid directory keeps its grid R.
    if (fs::exists(input.parent_path() / "grid.json"))
      for (const auto &e : load_grid(input.parent_path()))
        if (std::error_code ec; fs::equivalent(e.path, input, ec)) r = e.R;
    entries.push_back({r, input, fcidump ? "fcidump" : "pauli"});
  } else {
    fail(ErrorKind::Io, "input not found: " + input.string());
  }
  std::vector<Problem> out;
  out.reserve(entries.size());
  for (const auto &e : entries) out.push_back(make_problem(e, opt));
  if (out.size() == 1 && out[0].bundle) out[0].R = out[0].bundle->meta.R;
  return out;
}

QuantumState ground_state(const Problem &p) {
  if (p.two_orbital || !p.mo) {
    require_qubits(p, "ground state");
    return QuantumState::from_vector(fci(p.h).state(0));
  }
  return QuantumState::from_vector(fci(*p.mo, p.mo->n_elec, 0).state(0));
}

std::vector<std::string> MethodOptions::violations() const {
  std::vector<std::string> v;
  static const std::set<std::string> methods{"fci", "vqe", "qite", "qeom", "vqse"};
  if (!methods.count(method)) v.push_back("method.name: expected fci, vqe, qite, qeom or vqse, got " + method);
  if (ansatz != "ry" && ansatz != "so4" && ansatz != "quccsd")
    v.push_back("method.ansatz: expected ry, so4 or quccsd, got " + ansatz);
  if (depth < 1) v.push_back("method.depth: must be >= 1");
  if (optimizer != "bfgs" && optimizer != "gradient-descent")
    v.push_back("method.optimizer: expected bfgs or gradient-descent, got " + optimizer);
  if (max_iter < 1) v.push_back("method.max_iter: must be >= 1");
  if (shots < 0) v.push_back("method.shots: must be >= 0");
  if (shots > 0 && !seed) v.push_back("method.seed: required when shots > 0");
  for (auto [name, p] : {std::pair{"readout", noise.readout}, {"damping", noise.damping},
                         {"dephasing", noise.dephasing}, {"depolarizing", noise.depolarizing}})
    if (!(p >= 0.0 && p <= 1.0)) v.push_back(std::string("method.noise.") + name + ": must lie in [0, 1]");
  if (mitigate && !(noise.readout > 0)) v.push_back("method.mitigate: needs a readout noise model");
  if (calibration_shots < 0) v.push_back("method.calibration_shots: must be >= 0");
  if (calibration_shots > 0 && !seed) v.push_back("method.seed: required when calibration_shots > 0");
  if (!(dtau > 0)) v.push_back("method.dtau: must be > 0");
  if (!(beta >= dtau)) v.push_back("method.beta: must be >= dtau");
  if (qeom_basis != "spin-resolved" && qeom_basis != "spin-summed")
    v.push_back("method.qeom_basis: expected spin-resolved or spin-summed, got " + qeom_basis);
  if (qeom_state != "fci" && qeom_state != "vqe")
    v.push_back("method.qeom_state: expected fci or vqe, got " + qeom_state);
  if (shots > 0 && vqse_repeats < 2) v.push_back("method.vqse.repeats: must be >= 2");
  if (!(vqse_threshold > 0 && vqse_threshold < 1))
    v.push_back("method.vqse.threshold: must lie in (0, 1)");
  return v;
}

PointResult run_method(const Problem &p, const MethodOptions &opt) {
  const auto bad = opt.violations();
  if (!bad.empty()) {
    std::string msg;
    for (const auto &s : bad) msg += (msg.empty() ? "" : "; ") + s;
    fail(ErrorKind::Config, msg);
  }
  PointResult r;
  if (opt.method == "vqse") {
    r = run_vqse(p, opt);
    r.R = p.R;
    return r;
  }
  r.R = p.R;
  r.reference_energy = oracle_energy(p);
  if (opt.method == "fci") {
    r.energy = r.reference_energy;
    return r;
  }
  require_qubits(p, opt.method);
  const int n = p.n_qubits();
  Sampling smp(opt, n);
  const std::uint64_t seed = opt.seed.value_or(0);
  if (opt.method == "vqe" && opt.ansatz == "quccsd" && p.two_orbital && p.mo) {
    Problem full = p;
    full.two_orbital = false;
    full.h = map_hamiltonian(*p.mo);
    full.reference = hf_reference(p.mo->n_orb, p.mo->n_elec);
    return run_method(full, opt);
  }
  if (opt.method == "vqe") {
    EnergyEvaluator ev(make_spec(p, opt), p.h,
                       EvalOptions{opt.shots, seed, smp.noise_ptr(), smp.calib_ptr()});
    const VQEResult res = optimize(ev, opt);
    r.energy = res.energy;
    r.evaluations = static_cast<int>(res.evaluations);
    r.cnots = build_circuit(ev.spec(), res.parameters).cnot_count();
    r.detail_json = res.to_json();
  } else if (opt.method == "qite") {
    QiteConfig cfg;
    cfg.dtau = opt.dtau;
    cfg.beta_total = opt.beta;
    cfg.first_order = opt.first_order;
    cfg.shots = opt.shots;
    cfg.seed = seed;
    cfg.noise = smp.noise_ptr();
    cfg.calibration = smp.calib_ptr();
    const QiteTrace tr = qite_run(p.h, QuantumState::basis(n, p.reference), cfg);
    r.energy = tr.final_energy();
    r.cnots = tr.circuit.cnot_count();
    ojson steps = ojson::array();
    for (const auto &s : tr.steps)
      steps.push_back({{"beta", s.beta}, {"energy", s.energy}, {"x_norm", s.x_norm},
                       {"residual", s.residual}, {"flagged", s.flagged}, {"cnots", s.cnots},
                       {"general", s.general}});
    r.detail_json = ojson{{"steps", steps}}.dump(1);
  } else if (opt.method == "qeom") {
    QuantumState psi;
    if (opt.qeom_state == "vqe") {
      EnergyEvaluator ev(make_spec(p, opt), p.h);
      psi = optimize(ev, opt).state;
    } else {
      psi = ground_state(p);
    }
    SamplingOptions so{opt.shots, seed, smp.noise_ptr(), smp.calib_ptr()};
    const QeomMatrices qm = build_matrices(psi, qeom_basis(p, opt), p.h, so);
    r.energy = estimate(psi, p.h, so);
    r.metric_determinant = metric_determinant(qm);
    const QeomSolution sol = solve(qm);
    r.excitations = sol.energies;
    r.metric_condition = sol.metric_condition;
    r.detail_json = ojson{{"max_imag", sol.max_imag}}.dump();
  }
  return r;
}

ScanResult scan(const std::vector<Problem> &problems, const MethodOptions &opt) {
  ScanResult out;
  out.curve.method = opt.method;
  bool any_sigma = false;
  for (const auto &p : problems) {
    out.points.push_back(run_method(p, opt));
    const PointResult &r = out.points.back();
    out.curve.r.push_back(r.R);
    out.curve.e.push_back(r.energy);
    out.curve.sigma.push_back(r.sigma);
    any_sigma = any_sigma || r.sigma != 0.0;
  }
  if (!any_sigma) out.curve.sigma.clear();
  return out;
}

namespace {

template <class T>
void take(const ojson &j, const char *key, const std::string &path, T &dst,
          std::vector<std::string> &errs) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const std::exception &) {
    errs.push_back(path + key + ": wrong type");
  }
}

void unknown_keys(const ojson &j, const std::set<std::string> &known, const std::string &path,
                  std::vector<std::string> &errs) {
  for (const auto &[k, v] : j.items())
    if (!known.count(k)) errs.push_back(path + k + ": unknown key");
}

}  // namespace

RunConfig parse_config(const std::string &text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception &e) {
    fail(ErrorKind::Config, std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::Config, "config: top level must be an object");
  RunConfig c;
  std::vector<std::string> errs;
  unknown_keys(j, {"input", "output", "fold", "method"}, "", errs);
  std::string input, output = "out";
  take(j, "input", "", input, errs);
  take(j, "output", "", output, errs);
  if (input.empty()) errs.push_back("input: required");
  else if (!fs::exists(input)) errs.push_back("input: path does not exist: " + input);
  c.input = input;
  c.output = output;
  if (j.contains("fold")) {
    const ojson &f = j["fold"];
    if (!f.is_object()) {
      errs.push_back("fold: must be an object");
    } else {
      unknown_keys(f, {"frozen", "orbitals", "selector", "n_active_elec", "encode_two_orbital"},
                   "fold.", errs);
      take(f, "frozen", "fold.", c.fold.frozen, errs);
      take(f, "orbitals", "fold.", c.fold.orbitals, errs);
      take(f, "selector", "fold.", c.fold.selector, errs);
      take(f, "n_active_elec", "fold.", c.fold.n_active_elec, errs);
      take(f, "encode_two_orbital", "fold.", c.fold.encode_two_orbital, errs);
      if (c.fold.orbitals != "mo" && c.fold.orbitals != "iao" && c.fold.orbitals != "iao-boys")
        errs.push_back("fold.orbitals: expected mo, iao or iao-boys, got " + c.fold.orbitals);
      try {
        Selector::parse(c.fold.selector);
      } catch (const Error &e) {
        errs.push_back(std::string("fold.") + e.what());
      }
      for (int k : c.fold.frozen)
        if (k < 0) errs.push_back("fold.frozen: negative orbital index");
    }
  }
  if (!j.contains("method")) {
    errs.push_back("method: required");
  } else if (!j["method"].is_object()) {
    errs.push_back("method: must be an object");
  } else {
    const ojson &m = j["method"];
    MethodOptions &o = c.method;
    unknown_keys(m, {"name", "ansatz", "depth", "optimizer", "max_iter", "shots", "seed", "noise",
                     "mitigate", "calibration_shots", "dtau", "beta", "first_order", "qeom_basis",
                     "qeom_state", "vqse"},
                 "method.", errs);
    take(m, "name", "method.", o.method, errs);
    take(m, "ansatz", "method.", o.ansatz, errs);
    take(m, "depth", "method.", o.depth, errs);
    take(m, "optimizer", "method.", o.optimizer, errs);
    take(m, "max_iter", "method.", o.max_iter, errs);
    take(m, "shots", "method.", o.shots, errs);
    if (m.contains("seed")) {
      std::uint64_t s = 0;
      const std::size_t before = errs.size();
      take(m, "seed", "method.", s, errs);
      if (errs.size() == before) o.seed = s;
    }
    take(m, "mitigate", "method.", o.mitigate, errs);
    take(m, "calibration_shots", "method.", o.calibration_shots, errs);
    take(m, "dtau", "method.", o.dtau, errs);
    take(m, "beta", "method.", o.beta, errs);
    take(m, "first_order", "method.", o.first_order, errs);
    take(m, "qeom_basis", "method.", o.qeom_basis, errs);
    take(m, "qeom_state", "method.", o.qeom_state, errs);
    if (m.contains("noise")) {
      const ojson &nz = m["noise"];
      unknown_keys(nz, {"readout", "damping", "dephasing", "depolarizing"}, "method.noise.", errs);
      take(nz, "readout", "method.noise.", o.noise.readout, errs);
      take(nz, "damping", "method.noise.", o.noise.damping, errs);
      take(nz, "dephasing", "method.noise.", o.noise.dephasing, errs);
      take(nz, "depolarizing", "method.noise.", o.noise.depolarizing, errs);
    }
    if (m.contains("vqse")) {
      const ojson &vq = m["vqse"];
      unknown_keys(vq, {"singles", "doubles", "active_only", "repeats", "threshold"}, "method.vqse.", errs);
      take(vq, "singles", "method.vqse.", o.vqse_singles, errs);
      take(vq, "doubles", "method.vqse.", o.vqse_doubles, errs);
      take(vq, "active_only", "method.vqse.", o.vqse_active_only, errs);
      take(vq, "repeats", "method.vqse.", o.vqse_repeats, errs);
      take(vq, "threshold", "method.vqse.", o.vqse_threshold, errs);
    }
    for (auto &s : o.violations()) errs.push_back(std::move(s));
  }
  if (!errs.empty()) {
    std::string msg = "invalid config (" + std::to_string(errs.size()) + " problems)";
    for (const auto &e : errs) msg += "\n  " + e;
    fail(ErrorKind::Config, msg);
  }
  return c;
}

}  // namespace iaoq
