#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "radsum/cli.hpp"

using namespace radsum;
using namespace radsum::cli;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "radsum_test_" + std::to_string(counter++) + ".txt";
    std::ofstream f(path);
    f << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

int run_main(std::vector<std::string> args) {
  std::vector<char*> argv;
  args.insert(args.begin(), "radsum");
  for (auto& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("dist: interval query on an exact weights file") {
  TempFile f("1/2\n1/2\n");
  RunConfig cfg;
  cfg.command = Command::dist;
  cfg.weights_path = f.path;
  cfg.interval = std::make_pair(std::string("-1"), std::string("1"));
  cfg.format = OutputFormat::json;
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  auto j = nlohmann::json::parse(out.str());
  CHECK(j.at("schema_version") == 1);
  auto prob = j.at("results").at(0).at("prob");
  CHECK(prob.at("numerator") == 4);
  CHECK(prob.at("denominator") == 4);
  CHECK(prob.at("value") == 1.0);
  CHECK(prob.at("exact") == true);
}

TEST_CASE("dist: distribution CSV export") {
  TempFile f("1/2\n1/2\n");
  RunConfig cfg;
  cfg.command = Command::dist;
  cfg.weights_path = f.path;
  cfg.format = OutputFormat::csv;
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  CHECK(out.str().rfind("value,count,prob\n", 0) == 0);
  CHECK(out.str().find("-1,1,0.25") != std::string::npos);
}

TEST_CASE("dist: rational interval endpoints stay exact") {
  TempFile f("1/4\n1/4\n");
  RunConfig cfg;
  cfg.command = Command::dist;
  cfg.weights_path = f.path;
  cfg.interval = std::make_pair(std::string("-1/2"), std::string("1/2"));
  cfg.format = OutputFormat::json;
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  auto prob = nlohmann::json::parse(out.str()).at("results").at(0).at("prob");
  CHECK(prob.at("numerator") == 4);  // sums -1/2, 0, 0, 1/2 all inside
  CHECK(prob.at("exact") == true);
  CHECK(prob.at("boundary_resolved") == 0);
}

TEST_CASE("bounds: evaluation and table") {
  RunConfig cfg;
  cfg.command = Command::bounds;
  cfg.eval = {"G", "0.25"};
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  CHECK(out.str().find("0.42768") != std::string::npos);

  RunConfig tbl;
  tbl.command = Command::bounds;
  std::ostringstream out2;
  CHECK(run(tbl, out2) == 0);
  CHECK(out2.str().find("c*") != std::string::npos);
}

TEST_CASE("stopping: certificate JSON and exit status") {
  TempFile f("1/2\n1/2\n1/2\n1/2\n");
  RunConfig cfg;
  cfg.command = Command::stopping;
  cfg.weights_path = f.path;
  cfg.format = OutputFormat::json;
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  auto j = nlohmann::json::parse(out.str()).at("results");
  for (const char* k : {"K", "per_T", "final_prob", "final_bound", "pass"})
    CHECK(j.contains(k));
  CHECK(j.at("pass") == true);
  CHECK(j.at("K") == 2);
}

TEST_CASE("verify: selected fast claims pass") {
  RunConfig cfg;
  cfg.command = Command::verify;
  cfg.claims = {"G_quarter_value", "F_quarter_value", "c_star_value", "corollary_2_7",
                "endpoint_chain"};
  cfg.format = OutputFormat::json;
  std::ostringstream out;
  CHECK(run(cfg, out) == 0);
  auto rs = nlohmann::json::parse(out.str()).at("results");
  CHECK(rs.size() == 5);
  for (const auto& r : rs) CHECK(r.at("pass") == true);
}

TEST_CASE("verify: reports are byte-identical modulo the timestamp") {
  RunConfig cfg;
  cfg.command = Command::verify;
  cfg.claims = {"G_quarter_value", "endpoint_chain"};
  cfg.format = OutputFormat::json;
  std::ostringstream a, b;
  CHECK(run(cfg, a) == 0);
  CHECK(run(cfg, b) == 0);
  auto ja = nlohmann::json::parse(a.str());
  auto jb = nlohmann::json::parse(b.str());
  ja.erase("timestamp");
  jb.erase("timestamp");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("claim registry lists the canonical suite") {
  CHECK(claim_ids().size() == 15);
  SuiteOptions opt;
  opt.trials_theorem = 20;
  opt.trials_lemma2 = 20;
  opt.trials_bd = 10;
  opt.instances_stopping = 5;
  auto reports = run_claim_suite(opt);
  REQUIRE(reports.size() == 15);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CHECK(reports[i].claim_id == claim_ids()[i]);
    CHECK(reports[i].pass);
  }
}

TEST_CASE("command line: usage errors exit with 2") {
  CHECK(run_main({"dist"}) == 2);                       // missing --weights
  CHECK(run_main({"dist", "--weights", "no-such-file.txt", "--interval", "-1", "1"}) == 2);
  CHECK(run_main({"definitely-not-a-command"}) == 2);
}

TEST_CASE("command line: happy path through main") {
  TempFile f("0.5\n0.5\n");
  CHECK(run_main({"dist", "--weights", f.path, "--interval", "-1", "1", "--format", "json",
                  "--out", "radsum_test_out.json"}) == 0);
  std::ifstream in("radsum_test_out.json");
  REQUIRE(in.good());
  auto j = nlohmann::json::parse(in);
  CHECK(j.at("results").at(0).at("prob").at("numerator") == 4);
  std::remove("radsum_test_out.json");
}

TEST_CASE("malformed weights report the line number") {
  TempFile f("0.5\nwat\n");
  RunConfig cfg;
  cfg.command = Command::dist;
  cfg.weights_path = f.path;
  std::ostringstream out;
  try {
    run(cfg, out);
    CHECK(false);
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}
