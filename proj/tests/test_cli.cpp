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

#include "support.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "iaoq/analysis.hpp"
#include "iaoq/bundle.hpp"
#include "iaoq/error.hpp"
#include "iaoq/fci.hpp"
#include "iaoq/simulator.hpp"

using namespace iaoq;
using namespace iaoq::testing;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / "iaoq_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Result cli(const std::string &args) {
  const fs::path dir = scratch("io");
  const std::string cmd = std::string(IAOQ_CLI) + " " + args + " > " + (dir / "out").string() +
                          " 2> " + (dir / "err").string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "out");
  r.err = slurp(dir / "err");
  return r;
}

bool contains(const std::string &hay, const std::string &needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("version and usage errors", "[cli]") {
  CHECK(cli("--version").code == 0);
  CHECK(cli("").code == 2);
  CHECK(cli("no-such-command").code == 2);
  CHECK(cli("analyze-fit").code == 2);
}

TEST_CASE("config validation lists every violation", "[cli]") {
  const fs::path dir = scratch("bad_config");
  std::ofstream(dir / "c.json") << R"({"input": "/no/such/path", "output": ")" << (dir / "o").string()
                                << R"(", "method": {"name": "vqe", "ansatz": "nope", "shots": 100,
                                     "depth": -1, "bogus": 1}})";
  const Result r = cli("run --config " + (dir / "c.json").string());
  CHECK(r.code == 2);
  CHECK(contains(r.err, "input"));
  CHECK(contains(r.err, "method.ansatz"));
  CHECK(contains(r.err, "method.seed"));
  CHECK(contains(r.err, "method.depth"));
  CHECK(contains(r.err, "method.bogus"));

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(cli("run --config " + (dir / "broken.json").string()).code == 2);
}

TEST_CASE("missing seed with shots names the field", "[cli]") {
  const fs::path out = scratch("seed");
  const Result r = cli("run --method vqe --ansatz so4 --shots 100 --input " +
                       fixture("nh3/hono_luno/r1.00.txt").string() + " -o " + out.string());
  CHECK(r.code == 2);
  CHECK(contains(r.err, "method.seed"));
}

TEST_CASE("exit codes by error category", "[cli]") {
  const fs::path dir = scratch("codes");
  std::ofstream(dir / "mono.csv") << "R,E\n1,-1\n2,-2\n3,-3\n4,-4\n5,-5\n";
  const Result num = cli("analyze-fit --curve " + (dir / "mono.csv").string());
  CHECK(num.code == 3);
  CHECK(contains(num.err, "numerical"));
  const Result io = cli("analyze-fit --curve " + (dir / "missing.csv").string());
  CHECK(io.code == 4);
  // An output directory below a regular file cannot be created.
  std::ofstream(dir / "file") << "x";
  const Result io2 = cli("mitigate-demo --seed 1 -o " + (dir / "file" / "sub").string());
  CHECK(io2.code != 0);
  CHECK(cli("mitigate-demo -o " + (dir / "m").string()).code == 2);
}

TEST_CASE("FCI scan and fit on the H2 grid", "[cli]") {
  const fs::path out = scratch("h2_fci");
  const Result r = cli("scan --method fci --input " + fixture("h2_sto6g").string() + " -o " +
                       out.string());
  REQUIRE(r.code == 0);
  const PESCurve c = PESCurve::from_csv(slurp(out / "curve.csv"));
  CHECK(c.r.size() == 15);
  const auto man = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(man["status"] == "ok");
  CHECK(man["command"] == "scan");
  CHECK(man["config"]["method"]["name"] == "fci");
  CHECK(fs::exists(out / "timing.json"));
  const Result fit = cli("analyze-fit --curve " + (out / "curve.csv").string() + " --reference " +
                         (out / "fci.csv").string());
  REQUIRE(fit.code == 0);
  CHECK(contains(fit.out, "R_eq="));
  CHECK(contains(fit.out, "mean_deviation=0"));
  const FitResult f = fit_equilibrium(c);
  std::istringstream is(fit.out.substr(fit.out.find("R_eq=") + 5));
  double r_eq = 0.0;
  is >> r_eq;
  CHECK_THAT(r_eq, WithinAbs(f.r_eq, 1e-8));
}

TEST_CASE("SO4 run on an NH3 point reaches FCI", "[cli]") {
  const fs::path out = scratch("so4");
  const fs::path in = fixture("nh3/hono_luno/r1.00.txt");
  const Result r = cli("run --method vqe --ansatz so4 --depth 1 --shots 0 --input " + in.string() +
                       " -o " + out.string());
  REQUIRE(r.code == 0);
  const auto res = nlohmann::json::parse(slurp(out / "results.json"));
  REQUIRE(res["points"].size() == 1);
  const double e = res["points"][0]["energy"].get<double>();
  CHECK_THAT(e, WithinAbs(fci(PauliSum::from_text(slurp(in))).ground_energy(), 1e-8));
}

TEST_CASE("identical configs give byte-identical outputs", "[cli]") {
  const std::string args = "run --method vqe --ansatz so4 --shots 512 --seed 11 --readout 0.02 "
                           "--mitigate --max-iter 5 --input " +
                           fixture("nh3/hono_luno/r1.50.txt").string();
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const Result ra = cli(args + " -o " + a.string());
  const Result rb = cli(args + " -o " + b.string());
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.out == rb.out);
  for (const char *f : {"results.json", "curve.csv", "fci.csv"}) CHECK(slurp(a / f) == slurp(b / f));
  const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  CHECK(ma["config"]["method"] == mb["config"]["method"]);
  CHECK(ma["config"]["method"]["seed"] == 11);
  const fs::path c = scratch("det_c");
  REQUIRE(cli("run --method vqe --ansatz so4 --shots 512 --seed 12 --readout 0.02 --mitigate "
              "--max-iter 5 --input " + fixture("nh3/hono_luno/r1.50.txt").string() + " -o " +
              c.string()).code == 0);
  CHECK(slurp(a / "results.json") != slurp(c / "results.json"));
}

TEST_CASE("outputs round-trip through their loaders", "[cli]") {
  const fs::path fold = scratch("fold");
  const Result f = cli("fold --frozen 0 --n-active-elec 2 --selector hono-luno --input " + fixture("nh3/iao_augccpvqz").string() +
                       " -o " + fold.string());
  REQUIRE(f.code == 0);
  const auto grid = load_grid(fold);
  REQUIRE(grid.size() == 13);
  for (const auto &e : grid) {
    const PauliSum h = PauliSum::from_text(slurp(e.path));
    CHECK(h.n_qubits() == 2);
    std::ostringstream name;
    name << "nh3/hono_luno/" << e.path.filename().string();
    // The committed 2-qubit fixtures were produced by this command.
    CHECK(slurp(e.path) == slurp(fixture(name.str())));
  }

  const fs::path rdm = scratch("rdm");
  REQUIRE(cli("rdm --input " + fixture("nh3/hono_luno/r2.00.txt").string() + " -o " + rdm.string())
              .code == 0);
  const auto j = nlohmann::json::parse(slurp(rdm / "rdm.json"));
  CHECK_THAT(j["s_squared"].get<double>(), WithinAbs(0.0, 1e-9));
  CHECK_THAT(j["purity"].get<double>(), WithinAbs(1.0, 1e-9));
  const double fid = j["rhf_fidelity"].get<double>();
  CHECK(fid > 0.5);
  CHECK(fid < 1.0);

  const fs::path mit = scratch("mit");
  const Result m = cli("mitigate-demo --seed 3 --shots 4000 -o " + mit.string());
  REQUIRE(m.code == 0);
  const CountsHistogram raw = CountsHistogram::from_json(slurp(mit / "raw_counts.json"), 2);
  CHECK(raw.total() == 4000.0);
  const CountsHistogram fixed = CountsHistogram::from_json(slurp(mit / "mitigated_counts.json"), 2);
  CHECK(fixed.probability(0) > raw.probability(0));
}
