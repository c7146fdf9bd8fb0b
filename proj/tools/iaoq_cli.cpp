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

// Command-line driver: iaoq <subcommand> [options]. See README.md.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "iaoq/analysis.hpp"
#include "iaoq/bundle.hpp"
#include "iaoq/encoding.hpp"
#include "iaoq/error.hpp"
#include "iaoq/iao.hpp"
#include "iaoq/pipeline.hpp"
#include "iaoq/rng.hpp"
#include "iaoq/simulator.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using namespace iaoq;

namespace {

constexpr const char *kVersion = "0.1.0";

std::string read_file(const fs::path &p) {
  std::ifstream in(p);
  if (!in) fail(ErrorKind::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path &p, const std::string &text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out || !(out << text)) fail(ErrorKind::Io, "cannot write " + p.string());
}

std::vector<double> to_std(const Vec &v) { return {v.data(), v.data() + v.size()}; }

ojson matrix_json(const Mat &m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_std(m.row(i).transpose()));
  return rows;
}

// Writes the manifest first so a failing run still leaves a record.
struct Outputs {
  fs::path dir;
  ojson manifest;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  Outputs(fs::path d, const std::string &command, ojson config) : dir(std::move(d)) {
    fs::create_directories(dir);
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["config"] = std::move(config);
    manifest["outputs"] = ojson::array();
    manifest["status"] = "running";
    flush();
  }
  void add(const std::string &name, const std::string &text) {
    write_file(dir / name, text);
    manifest["outputs"].push_back(name);
  }
  void flush() { write_file(dir / "manifest.json", manifest.dump(1) + "\n"); }
  void finish() {
    manifest["status"] = "ok";
    flush();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file(dir / "timing.json", ojson{{"wall_seconds", s}}.dump(1) + "\n");
  }
};

ojson fold_json(const FoldOptions &f) {
  return {{"frozen", f.frozen},
          {"orbitals", f.orbitals},
          {"selector", f.selector},
          {"n_active_elec", f.n_active_elec},
          {"encode_two_orbital", f.encode_two_orbital}};
}

ojson method_json(const MethodOptions &m) {
  ojson j{{"name", m.method},       {"ansatz", m.ansatz},
          {"depth", m.depth},       {"optimizer", m.optimizer},
          {"max_iter", m.max_iter}, {"shots", m.shots},
          {"mitigate", m.mitigate}, {"calibration_shots", m.calibration_shots},
          {"dtau", m.dtau},         {"beta", m.beta},
          {"first_order", m.first_order}, {"qeom_basis", m.qeom_basis},
          {"qeom_state", m.qeom_state}};
  if (m.seed) j["seed"] = *m.seed;
  j["noise"] = {{"readout", m.noise.readout},
                {"damping", m.noise.damping},
                {"dephasing", m.noise.dephasing},
                {"depolarizing", m.noise.depolarizing}};
  j["vqse"] = {{"singles", m.vqse_singles},
               {"doubles", m.vqse_doubles},
               {"active_only", m.vqse_active_only},
               {"repeats", m.vqse_repeats},
               {"threshold", m.vqse_threshold}};
  return j;
}

ojson point_json(const PointResult &r) {
  ojson j{{"R", r.R},
          {"energy", r.energy},
          {"sigma", r.sigma},
          {"fci", r.reference_energy},
          {"deviation", r.energy - r.reference_energy}};
  if (!r.excitations.empty()) {
    j["excitations"] = r.excitations;
    j["metric_determinant"] = r.metric_determinant;
    j["metric_condition"] = r.metric_condition;
  }
  if (r.evaluations) j["evaluations"] = r.evaluations;
  if (r.cnots) j["cnots"] = r.cnots;
  if (!r.detail_json.empty()) j["detail"] = ojson::parse(r.detail_json);
  return j;
}

// Flags override the config file; the merged object is validated in one pass.
struct RunFlags {
  std::string config, input, output, method, ansatz, optimizer, selector, orbitals, qeom_basis;
  std::vector<int> frozen;
  int depth = -1, shots = -1, max_iter = -1, n_active_elec = -2, calibration_shots = -1;
  long long seed = -1;
  double readout = -1, damping = -1, dephasing = -1, depolarizing = -1, dtau = -1, beta = -1;
  bool mitigate = false, no_encode = false;

  void attach(CLI::App *app) {
    app->add_option("--config", config, "JSON run configuration");
    app->add_option("--input", input, "grid directory, bundle directory, FCIDUMP or Pauli text");
    app->add_option("--output,-o", output, "output directory");
    app->add_option("--method", method, "fci | vqe | qite | qeom | vqse");
    app->add_option("--ansatz", ansatz, "ry | so4 | quccsd");
    app->add_option("--depth", depth);
    app->add_option("--optimizer", optimizer, "bfgs | gradient-descent");
    app->add_option("--max-iter", max_iter);
    app->add_option("--shots", shots, "0 selects exact expectations");
    app->add_option("--seed", seed);
    app->add_option("--readout", readout, "symmetric readout flip probability");
    app->add_option("--damping", damping);
    app->add_option("--dephasing", dephasing);
    app->add_option("--depolarizing", depolarizing);
    app->add_flag("--mitigate", mitigate, "apply calibration-matrix readout mitigation");
    app->add_option("--calibration-shots", calibration_shots);
    app->add_option("--dtau", dtau);
    app->add_option("--beta", beta);
    app->add_option("--qeom-basis", qeom_basis);
    app->add_option("--frozen", frozen, "core orbitals to freeze");
    app->add_option("--selector", selector, "full | hono-luno | hf-window(k)");
    app->add_option("--orbitals", orbitals, "mo | iao | iao-boys (bundle inputs)");
    app->add_option("--n-active-elec", n_active_elec);
    app->add_flag("--no-encode", no_encode, "keep 2-orbital spaces on 4 qubits");
  }

  RunConfig resolve() const {
    ojson j = config.empty() ? ojson::object() : ojson::parse(read_file(config), nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::Config, "config: " + config + " is not valid JSON");
    ojson m = j.contains("method") ? j["method"] : ojson::object();
    ojson f = j.contains("fold") ? j["fold"] : ojson::object();
    if (!input.empty()) j["input"] = input;
    if (!output.empty()) j["output"] = output;
    if (!method.empty()) m["name"] = method;
    if (!ansatz.empty()) m["ansatz"] = ansatz;
    if (!optimizer.empty()) m["optimizer"] = optimizer;
    if (!qeom_basis.empty()) m["qeom_basis"] = qeom_basis;
    if (depth != -1) m["depth"] = depth;
    if (max_iter != -1) m["max_iter"] = max_iter;
    if (shots != -1) m["shots"] = shots;
    if (seed != -1) m["seed"] = seed;
    if (calibration_shots != -1) m["calibration_shots"] = calibration_shots;
    if (mitigate) m["mitigate"] = true;
    if (dtau != -1) m["dtau"] = dtau;
    if (beta != -1) m["beta"] = beta;
    auto noise = [&](const char *k, double v) {
      if (v != -1) m["noise"][k] = v;
    };
    noise("readout", readout);
    noise("damping", damping);
    noise("dephasing", dephasing);
    noise("depolarizing", depolarizing);
    if (!frozen.empty()) f["frozen"] = frozen;
    if (!selector.empty()) f["selector"] = selector;
    if (!orbitals.empty()) f["orbitals"] = orbitals;
    if (n_active_elec != -2) f["n_active_elec"] = n_active_elec;
    if (no_encode) f["encode_two_orbital"] = false;
    j["method"] = m;
    if (!f.empty()) j["fold"] = f;
    return parse_config(j.dump());
  }
};

ojson config_json(const RunConfig &c) {
  return {{"input", c.input.string()},
          {"output", c.output.string()},
          {"fold", fold_json(c.fold)},
          {"method", method_json(c.method)}};
}

int cmd_run(const RunFlags &flags, bool whole_grid, double point) {
  const RunConfig cfg = flags.resolve();
  Outputs out(cfg.output, whole_grid ? "scan" : "run", config_json(cfg));
  std::vector<Problem> problems = load_problems(cfg.input, cfg.fold);
  if (!whole_grid && problems.size() > 1) {
    auto it = std::find_if(problems.begin(), problems.end(),
                           [&](const Problem &p) { return std::abs(p.R - point) < 1e-9; });
    if (it == problems.end())
      fail(ErrorKind::Config, "point: R not on the grid; pass --point with a grid value");
    problems = {*it};
  }
  const ScanResult res = scan(problems, cfg.method);
  ojson pts = ojson::array();
  for (const auto &p : res.points) pts.push_back(point_json(p));
  out.add("results.json", ojson{{"method", cfg.method.method}, {"points", pts}}.dump(1) + "\n");
  PESCurve fci_curve = res.curve;
  for (std::size_t i = 0; i < res.points.size(); ++i) fci_curve.e[i] = res.points[i].reference_energy;
  fci_curve.sigma.clear();
  fci_curve.method = "fci";
  out.add("curve.csv", res.curve.to_csv());
  out.add("fci.csv", fci_curve.to_csv());
  std::cout << std::setprecision(12);
  for (const auto &p : res.points)
    std::cout << "R=" << p.R << " E=" << p.energy << " FCI=" << p.reference_energy << "\n";
  if (res.points.size() > 1)
    std::cout << "mean |E - FCI| = " << mean_deviation(res.curve, fci_curve) << "\n";
  out.finish();
  return 0;
}

int cmd_fold(const RunFlags &flags, const std::string &format) {
  if (format != "pauli" && format != "fcidump")
    fail(ErrorKind::Config, "format: expected pauli or fcidump, got " + format);
  RunFlags f = flags;
  if (f.method.empty()) f.method = "fci";
  const RunConfig cfg = f.resolve();
  Outputs out(cfg.output, "fold", config_json(cfg));
  const auto problems = load_problems(cfg.input, cfg.fold);
  std::vector<GridEntry> grid;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const Problem &p = problems[i];
    std::ostringstream name;
    name << "r" << std::fixed << std::setprecision(2) << p.R << (format == "pauli" ? ".txt" : ".fcidump");
    if (format == "pauli") {
      if (p.h.n_qubits() == 0) fail(ErrorKind::InvalidInput, "fold: problem exceeds the qubit budget");
      out.add(name.str(), p.h.simplified(1e-12).to_text());
    } else {
      if (!p.mo) fail(ErrorKind::InvalidInput, "fold: fcidump output needs an integral source");
      write_fcidump(*p.mo, cfg.output / name.str());
      out.manifest["outputs"].push_back(name.str());
    }
    grid.push_back({p.R, name.str(), format});
  }
  save_grid(grid, cfg.output);
  out.manifest["outputs"].push_back("grid.json");
  out.finish();
  std::cout << "folded " << problems.size() << " point(s) into " << cfg.output.string() << "\n";
  return 0;
}

int cmd_iao(const std::string &bundle_dir, const std::string &output, bool localize) {
  const IntegralBundle b = load_bundle(bundle_dir);
  Outputs out(output, "iao-build", {{"bundle", bundle_dir}, {"localize", localize}});
  IAOBasis iao = lowdin_orthonormalize(build_iao(b), b.s1);
  ojson j;
  if (localize) {
    const double before = boys_functional(iao.coeff, b.dipole);
    BoysResult br = boys_localize(iao, b.dipole, b.s1);
    iao = br.basis;
    j["boys"] = {{"before", before}, {"after", boys_functional(iao.coeff, b.dipole)},
                 {"sweeps", br.sweeps}, {"converged", br.converged}};
  }
  const double res = span_residual(iao.coeff, b.s1, b.occupied());
  j["n_b1"] = b.n_b1;
  j["n_iao"] = iao.coeff.cols();
  j["span_residual"] = res;
  j["coeff"] = matrix_json(iao.coeff);
  out.add("iao.json", j.dump(1) + "\n");
  out.finish();
  std::cout << "n_iao=" << iao.coeff.cols() << " span_residual=" << res << "\n";
  return 0;
}

int cmd_rdm(const RunFlags &flags, double point) {
  RunFlags f = flags;
  if (f.method.empty()) f.method = "fci";
  const RunConfig cfg = f.resolve();
  Outputs out(cfg.output, "rdm", config_json(cfg));
  auto problems = load_problems(cfg.input, cfg.fold);
  auto it = problems.size() == 1 ? problems.begin()
                                 : std::find_if(problems.begin(), problems.end(), [&](const Problem &p) {
                                     return std::abs(p.R - point) < 1e-9;
                                   });
  if (it == problems.end()) fail(ErrorKind::Config, "point: R not on the grid");
  const Problem &p = *it;
  const QuantumState psi = ground_state(p);
  const NoiseModel noise = NoiseModel::readout(std::max(p.n_qubits(), 1), cfg.method.noise.readout);
  SamplingOptions so{cfg.method.shots, cfg.method.seed.value_or(0),
                     cfg.method.noise.readout > 0 ? &noise : nullptr, nullptr};
  OperatorEncoder enc;
  if (p.two_orbital) enc = [](const PauliSum &o) { return TwoOrbitalEncoding::encode_operator(o); };
  const RDMPair rd = measure_rdms(psi, p.n_orb, so, enc);
  ojson j{{"R", p.R}, {"n_orb", rd.n_orb}};
  j["rdm1"] = {matrix_json(rd.rdm1[0]), matrix_json(rd.rdm1[1])};
  j["rdm2"] = {rd.rdm2[0], rd.rdm2[1], rd.rdm2[2], rd.rdm2[3]};
  j["asymmetry"] = rd.asymmetry;
  j["s_squared"] = s_squared(psi, p.n_orb, so, enc);
  if (p.n_qubits() <= 3) {
    const CMat rho = qst(psi, so);
    j["purity"] = purity(rho);
    j["rhf_fidelity"] = fidelity(rho, p.reference);
  }
  if (p.mo) j["energy_from_rdms"] = energy_from_rdms(rd, *p.mo);
  out.add("rdm.json", j.dump(1) + "\n");
  out.finish();
  std::cout << "S^2=" << j["s_squared"].get<double>() << "\n";
  return 0;
}

int cmd_fit(const std::string &curve_path, const std::string &reference) {
  const PESCurve c = PESCurve::from_csv(read_file(curve_path));
  const FitResult f = fit_equilibrium(c);
  std::cout << std::setprecision(10) << "R_eq=" << f.r_eq << " E_min=" << f.e_min
            << " dE=" << f.delta_e << "\n";
  if (!reference.empty())
    std::cout << "mean_deviation=" << mean_deviation(c, PESCurve::from_csv(read_file(reference)))
              << "\n";
  return 0;
}

int cmd_mitigate(double p, int shots, long long seed, int n, const std::string &output) {
  if (seed < 0) fail(ErrorKind::Config, "seed: required");
  if (n < 1 || n > 4) fail(ErrorKind::Config, "qubits: must lie in [1, 4]");
  Outputs out(output, "mitigate-demo", {{"readout", p}, {"shots", shots}, {"seed", seed}, {"qubits", n}});
  const NoiseModel noise = NoiseModel::readout(n, p);
  const auto s = static_cast<std::uint64_t>(seed);
  const CalibrationMatrix cal = build_calibration(noise, n, shots, derive_seed(s, 1));
  const CountsHistogram raw = sample(QuantumState::basis(n, 0), PauliString{}, shots, derive_seed(s, 2), &noise);
  const CountsHistogram fixed = mitigate(raw, cal);
  auto zexp = [&](const CountsHistogram &h) {
    double acc = 0.0;
    for (const auto &[k, c] : h.counts) acc += (__builtin_popcountll(k) % 2 ? -c : c);
    return acc / h.total();
  };
  out.add("raw_counts.json", raw.to_json() + "\n");
  out.add("mitigated_counts.json", fixed.to_json() + "\n");
  out.finish();
  std::cout << "<Z...Z> raw=" << zexp(raw) << " mitigated=" << zexp(fixed) << " exact=1\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"iaoq: IAO active spaces and quantum solvers on a built-in simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunFlags run_flags, scan_flags, fold_flags, rdm_flags;
  double run_point = 0.0, rdm_point = 0.0;
  auto *run = app.add_subcommand("run", "run one method on a single geometry");
  run_flags.attach(run);
  run->add_option("--point", run_point, "grid value of R to run");
  auto *scn = app.add_subcommand("scan", "run one method over a geometry grid");
  scan_flags.attach(scn);

  std::string format = "pauli";
  auto *fld = app.add_subcommand("fold", "ao2mo + frozen core + active space, write Hamiltonians");
  fold_flags.attach(fld);
  fld->add_option("--format", format, "pauli | fcidump");

  std::string bundle, iao_out = "iao_out";
  bool localize = false;
  auto *iao = app.add_subcommand("iao-build", "build orthonormal (optionally Boys-localized) IAOs");
  iao->add_option("--bundle", bundle)->required();
  iao->add_option("--output,-o", iao_out);
  iao->add_flag("--localize", localize);

  auto *rdm = app.add_subcommand("rdm", "ground-state density matrices, S^2, purity");
  rdm_flags.attach(rdm);
  rdm->add_option("--point", rdm_point);

  std::string curve, reference;
  auto *fit = app.add_subcommand("analyze-fit", "fit R_eq and dE from a curve CSV");
  fit->add_option("--curve", curve)->required();
  fit->add_option("--reference", reference, "second curve for the mean deviation");

  double p = 0.02;
  int shots = 8192, nq = 2;
  long long seed = -1;
  std::string mit_out = "mitigate_out";
  auto *mit = app.add_subcommand("mitigate-demo", "readout calibration and mitigation on |0...0>");
  mit->add_option("--readout", p);
  mit->add_option("--shots", shots);
  mit->add_option("--seed", seed);
  mit->add_option("--qubits", nq);
  mit->add_option("--output,-o", mit_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (run->parsed()) return cmd_run(run_flags, false, run_point);
    if (scn->parsed()) return cmd_run(scan_flags, true, 0.0);
    if (fld->parsed()) return cmd_fold(fold_flags, format);
    if (iao->parsed()) return cmd_iao(bundle, iao_out, localize);
    if (rdm->parsed()) return cmd_rdm(rdm_flags, rdm_point);
    if (fit->parsed()) return cmd_fit(curve, reference);
    if (mit->parsed()) return cmd_mitigate(p, shots, seed, nq, mit_out);
  } catch (const Error &e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
