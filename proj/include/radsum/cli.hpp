#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "radsum/dist.hpp"
#include "radsum/report.hpp"

namespace radsum::cli {

enum class Command { bounds, dist, stopping, verify, search, report };
enum class OutputFormat { text, json, csv };

struct RunConfig {
  Command command = Command::report;
  std::string weights_path;
  dist::Engine engine = dist::Engine::automatic;
  std::uint64_t seed = 42;
  dist::DistConfig caps;  // naive/mim/path caps, boundary eps, threads
  OutputFormat format = OutputFormat::text;
  std::string out_path;  // empty = stdout

  // dist
  std::optional<std::pair<std::string, std::string>> interval;  // raw tokens, may be rational
  std::optional<std::string> tail;
  std::optional<std::string> shift;

  // bounds
  std::vector<std::string> eval;  // e.g. {"G", "0.25"} or {"U", "2", "2"}
  bool show_table = false;

  // verify / report
  double grid_step = 1e-3;
  int trials = -1;  // -1 = per-claim defaults
  std::vector<std::string> claims;

  // search
  int search_n = 8;
  int restarts = 50;
};

/// Canonical claim suite parameters; per-claim trial counts are the
/// acceptance-grade defaults unless overridden.
struct SuiteOptions {
  std::uint64_t seed = 42;
  double grid_step = 1e-3;
  int trials_theorem = 1000;
  int trials_lemma2 = 500;
  int trials_bd = 500;
  int instances_stopping = 100;
  dist::DistConfig cfg;
};

const std::vector<std::string>& claim_ids();

/// Runs the selected claims (all when `selected` is empty) and returns one
/// report per claim, in registry order.
std::vector<VerificationReport> run_claim_suite(const SuiteOptions& opt,
                                                const std::vector<std::string>& selected = {});

/// Executes one configured command. Returns 0 when every executed check
/// passed, 1 when a bound/inequality check failed. Usage and input errors
/// are reported by throwing; the CLI maps them to exit code 2.
int run(const RunConfig& cfg, std::ostream& out);

/// Full command-line front end.
int main(int argc, char** argv);

}  // namespace radsum::cli
