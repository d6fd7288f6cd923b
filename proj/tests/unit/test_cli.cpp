#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "trg/cli.hpp"
#include "trg/json_io.hpp"

using trg::json;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
  json doc;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = trg::cli::run(args, out, err);
  RunResult r{code, out.str(), err.str(), json()};
  if (!r.out.empty() && (r.out[0] == '{' || r.out[0] == '['))
    r.doc = json::parse(r.out);
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("geom subcommand emits the sine-squared cross-ratios") {
  const auto r = run_cli({"geom", "--k", "2,3,7"});
  REQUIRE(r.code == 0);
  const auto& cr = r.doc["results"]["cross_ratios"];
  CHECK(std::abs(cr[0].get<double>() - 0.5) < 1e-10);
  CHECK(std::abs(cr[1].get<double>() - 0.25) < 1e-10);
  CHECK(std::abs(cr[2].get<double>() - 0.049515566048790434) < 1e-10);
  CHECK(r.doc["results"]["orders"]["r1r2"]["computed"].get<int>() == 7);
  CHECK(r.doc["inputs"]["command"] == "geom");
  CHECK(r.doc.contains("tolerances"));
}

TEST_CASE("expected-dim subcommand") {
  const auto r = run_cli({"expected-dim", "--n", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.doc["results"]["expected_dimension"].get<long long>() == -8);
}

TEST_CASE("domain errors exit with code 1 and a machine-readable payload") {
  const auto r = run_cli({"geom", "--k", "3,3,3"});
  CHECK(r.code == 1);
  CHECK(r.doc["error"] == "NotHyperbolic");
  CHECK(r.doc.contains("detail"));
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({"geom", "--nonsense"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"geom", "--k", "2,3"}).code == 2);
  CHECK(run_cli({"conf6", "--n", "2"}).code == 2);  // missing --lambda
}

TEST_CASE("embed subcommand reports scalar cross-ratios for the diagonal kind") {
  const auto r = run_cli({"embed", "--k", "2,3,7", "--kind", "diagonal", "--n", "2"});
  REQUIRE(r.code == 0);
  for (const auto& c : r.doc["results"]["cross_ratios"])
    CHECK(c["scalar_deviation"].get<double>() < 1e-9);
  CHECK(r.doc["results"]["relation_residual"].get<double>() < 1e-18);
}

TEST_CASE("conf6 output round-trips through invariants") {
  const auto path = temp_file("trg_conf6_roundtrip.json");
  const auto conf = run_cli({"conf6", "--lambda", "0.5,0.25,0.049515566048790434",
                             "--n", "2", "--out", path.string()});
  REQUIRE(conf.code == 0);

  const auto inv = run_cli({"invariants", "--config", path.string()});
  REQUIRE(inv.code == 0);
  const auto& configs = inv.doc["results"]["configs"];
  CHECK(configs.size() == 3);
  for (const auto& c : configs) {
    REQUIRE(c.contains("lambda_target"));
    for (int i = 0; i < 3; ++i) {
      const double target = c["lambda_target"][i].get<double>();
      const double got = c["lambda_recovered"][i].get<double>();
      CHECK(std::abs(target - got) < 1e-9);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("maslov subcommand labels the eigenspace triple") {
  const auto r = run_cli({"maslov", "--k", "3,4,5", "--n", "2", "--signature", "1,1"});
  REQUIRE(r.code == 0);
  const auto sig = r.doc["results"]["maslov_signature"];
  const int p = sig[0].get<int>(), q = sig[1].get<int>();
  CHECK(p + q == 2);
  CHECK(((p == 1 && q == 1)));
  const auto r20 = run_cli({"maslov", "--k", "3,4,5", "--n", "2", "--signature", "2,0"});
  REQUIRE(r20.code == 0);
  const auto sig20 = r20.doc["results"]["maslov_signature"];
  const bool definite = (sig20[0] == 2 && sig20[1] == 0) || (sig20[0] == 0 && sig20[1] == 2);
  CHECK(definite);
}

TEST_CASE("probe subcommand runs a tiny deterministic experiment") {
  const std::vector<std::string> argv = {"probe", "--k",     "2,3,7",  "--kind",
                                         "diagonal", "--n",  "1",      "--trials",
                                         "3",        "--magnitude", "1e-3", "--seed", "5"};
  const auto r = run_cli(argv);
  REQUIRE(r.code == 0);
  CHECK(r.doc["results"]["summary"]["converged"].get<int>() == 3);
  CHECK(r.doc["results"]["summary"]["conjugate_to_base"].get<int>() == 3);
  CHECK(r.doc["results"]["trials"].size() == 3);

  const auto again = run_cli(argv);
  CHECK(again.out == r.out);
}

TEST_CASE("tolerance overrides are loaded and echoed") {
  const auto path = temp_file("trg_tols.json");
  {
    std::ofstream f(path);
    f << R"({"rank_tol": 1e-8, "grid_tol": 1e-5})";
  }
  const auto r = run_cli({"geom", "--k", "2,3,7", "--tol-file", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.doc["tolerances"]["rank_tol"].get<double>() == 1e-8);
  CHECK(r.doc["tolerances"]["grid_tol"].get<double>() == 1e-5);
  CHECK(r.doc["tolerances"]["conj_tol"].get<double>() == 1e-8);
  std::filesystem::remove(path);

  {
    std::ofstream f(path);
    f << R"({"rank_tol": -1})";
  }
  CHECK(run_cli({"geom", "--k", "2,3,7", "--tol-file", path.string()}).code == 1);
  std::filesystem::remove(path);
}

TEST_CASE("--out writes the envelope to a file") {
  const auto path = temp_file("trg_out.json");
  const auto r = run_cli({"expected-dim", "--n", "2", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  REQUIRE(f.good());
  const json doc = json::parse(f);
  CHECK(doc["results"]["expected_dimension"].get<long long>() == -3);
  std::filesystem::remove(path);
}

TEST_CASE("non-real-root targets surface as NonRealRoots") {
  const auto r = run_cli({"conf6", "--lambda", "0.9,0.9,0.9", "--n", "1"});
  CHECK(r.code == 1);
  CHECK(r.doc["error"] == "NonRealRoots");
}
