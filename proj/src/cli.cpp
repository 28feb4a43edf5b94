#include "radsum/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "radsum/bounds.hpp"
#include "radsum/errors.hpp"
#include "radsum/numerics.hpp"
#include "radsum/rng.hpp"
#include "radsum/search.hpp"
#include "radsum/stopping.hpp"
#include "radsum/weights.hpp"

namespace radsum::cli {

using dist::Bound;
using dist::ExactProbability;

namespace {

Bound parse_bound(const std::string& tok) {
  if (auto r = Rational::parse(tok)) return Bound::exact(*r);
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
    throw std::runtime_error("malformed interval endpoint: '" + tok + "'");
  return Bound::from_double(v);
}

nlohmann::json prob_json(const ExactProbability& p) {
  return {{"numerator", p.numerator},
          {"denominator", p.denominator},
          {"value", p.float_value},
          {"boundary_resolved", p.boundary_resolved},
          {"exact", p.exact}};
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json envelope(const std::string& command, std::uint64_t seed, nlohmann::json results) {
  return {{"schema_version", 1},
          {"command", command},
          {"seed", seed},
          {"timestamp", iso_timestamp()},
          {"results", std::move(results)}};
}

void print_constant_header(std::ostream& out) {
  auto t = bounds::make_bound_table();
  out << std::setprecision(10) << "# G(1/4) = " << t.G_quarter << "   F(1/4) = " << t.F_quarter
      << "   c* = " << t.c_star << "   Phibar(sqrt2) = " << t.phi_bar_sqrt2 << "\n";
}

// ---------------------------------------------------------------------------
// claim registry

VerificationReport point_claim(const std::string& id, double value, double target,
                               double tolerance) {
  VerificationReport r;
  r.claim_id = id;
  r.margin = tolerance - std::fabs(value - target);
  r.pass = r.margin >= 0.0;
  r.worst_point = {{"value", value}, {"target", target}};
  r.grid_spec = "point evaluation, tolerance " + std::to_string(tolerance);
  return r;
}

VerificationReport claim_F_quarter() {
  VerificationReport r;
  r.claim_id = "F_quarter_value";
  double v = bounds::eval_F(0.25);
  r.pass = v == 0.40625;  // 13/32 is exact in binary
  r.margin = 0.0;
  r.worst_point = {{"value", v}};
  r.grid_spec = "exact comparison against 13/32";
  return r;
}

VerificationReport claim_mix_family(const std::string& id, bool half_mix) {
  const double floor_value = bounds::eval_G(0.25);
  double min_margin = std::numeric_limits<double>::infinity();
  int min_k = 0;
  for (int k = 2; k <= 64; ++k) {
    double v = half_mix ? bounds::eval_half_mix(k) : bounds::eval_h(k);
    double m = v - floor_value;
    if (m < min_margin) {
      min_margin = m;
      min_k = k;
    }
  }
  VerificationReport r;
  r.claim_id = id;
  r.margin = min_margin;
  r.pass = min_margin >= 0.0;
  r.worst_point = {{"k", min_k}};
  r.grid_spec = "k in {2..64}";
  return r;
}

VerificationReport claim_concavity(const SuiteOptions& opt) {
  auto c = bounds::check_concavity(0.75, 0.0, 4.0 / 9.0, 1000);
  VerificationReport r;
  r.claim_id = "concavity_xi_3_4";
  r.pass = c.pass;
  r.margin = 1e-9 - std::max(c.max_second_difference, c.max_closed_form_second_derivative);
  r.worst_point = c.to_json();
  r.grid_spec = "xi=3/4 on [0,4/9], grid 1000";
  (void)opt;
  return r;
}

VerificationReport claim_L_max(const SuiteOptions& opt) {
  const double sqrt3 = std::sqrt(3.0);
  const double ceiling = bounds::g_dominates_f_threshold();
  double max_L = -1.0, at = 0.0;
  long steps = static_cast<long>(std::floor(8.0 / opt.grid_step + 1e-9));
  for (long k = 1; k <= steps; ++k) {
    double y = static_cast<double>(k) * opt.grid_step;
    double L = bounds::eval_L(y);
    if (L > max_L) {
      max_L = L;
      at = y;
    }
  }
  VerificationReport r;
  r.claim_id = "L_max_sqrt3";
  r.margin = ceiling - max_L;
  r.pass = max_L < ceiling && std::fabs(at - sqrt3) <= opt.grid_step + 1e-12;
  r.worst_point = {{"argmax", at}, {"max_L", max_L}};
  r.grid_spec = "y in (0,8], step " + std::to_string(opt.grid_step);
  r.details["sqrt3"] = sqrt3;
  r.details["threshold"] = ceiling;
  return r;
}

VerificationReport claim_stopping_certificates(const SuiteOptions& opt) {
  using search::InstanceGenerator;
  using search::Style;

  double min_final_margin = std::numeric_limits<double>::infinity();
  nlohmann::json witness;
  bool all_pass = true;
  int ran = 0;

  auto consider = [&](const WeightVector& w, const nlohmann::json& tag) {
    auto cert = stopping::theorem_certificate(w, opt.cfg);
    ++ran;
    if (!cert.pass) all_pass = false;
    double m = cert.final_prob.float_value - cert.final_bound;
    if (m < min_final_margin) {
      min_final_margin = m;
      witness = {{"instance", tag}, {"K", cert.K}, {"branch", cert.branch},
                 {"final", cert.final_prob.float_value}};
    }
  };

  consider(WeightVector::from_rationals(
               {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}),
           "half-four");
  consider(WeightVector::from_doubles({1.0, 0.0, 0.0, 0.0}), "unit");
  consider(search::random_unit_weights(InstanceGenerator{9, opt.seed, Style::equal}),
           "equal-9");

  Rng master(opt.seed);
  const Style styles[3] = {Style::uniform_sphere, Style::sparse, Style::two_block};
  for (int t = 0; t < opt.instances_stopping; ++t) {
    Rng trial = master.fork(static_cast<std::uint64_t>(t) + 1000);
    int n = static_cast<int>(trial.uniform_int(4, 14));
    auto w = search::random_unit_weights(InstanceGenerator{n, trial.next_u64(), styles[t % 3]});
    consider(w, {{"trial", t}, {"n", n}});
  }

  VerificationReport r;
  r.claim_id = "stopping_certificates";
  r.margin = min_final_margin;
  r.pass = all_pass && min_final_margin >= 0.0;
  r.worst_point = witness;
  r.grid_spec = std::to_string(ran) + " instances (n <= 14), seed " + std::to_string(opt.seed);
  return r;
}

VerificationReport rename(VerificationReport r, const std::string& id) {
  r.claim_id = id;
  return r;
}

}  // namespace

const std::vector<std::string>& claim_ids() {
  static const std::vector<std::string> ids = {
      "G_quarter_value",  "F_quarter_value",     "c_star_value",
      "corollary_2_7",    "G_dominates_F",       "h_k_ge_G_quarter",
      "half_mix_ge_G_quarter", "concavity_xi_3_4", "endpoint_chain",
      "L_max_sqrt3",      "bd_sharpness",        "lemma2_quarter",
      "lemma2_2_7",       "theorem_batch",       "stopping_certificates"};
  return ids;
}

std::vector<VerificationReport> run_claim_suite(const SuiteOptions& opt,
                                                const std::vector<std::string>& selected) {
  auto wanted = [&](const std::string& id) {
    if (selected.empty()) return true;
    for (const auto& s : selected)
      if (s == id) return true;
    return false;
  };

  std::vector<VerificationReport> out;
  auto add = [&](const std::string& id, auto&& fn) {
    if (wanted(id)) out.push_back(fn());
  };

  add("G_quarter_value",
      [&] { return point_claim("G_quarter_value", bounds::eval_G(0.25), 0.42768, 1e-5); });
  add("F_quarter_value", [&] { return claim_F_quarter(); });
  add("c_star_value", [&] {
    return point_claim("c_star_value", bounds::make_bound_table().c_star, 3.178, 1e-3);
  });
  add("corollary_2_7",
      [&] { return point_claim("corollary_2_7", bounds::eval_G(2.0 / 7.0), 0.40246, 1e-5); });
  add("G_dominates_F", [&] { return bounds::check_G_dominates_F(8.0, opt.grid_step); });
  add("h_k_ge_G_quarter", [&] { return claim_mix_family("h_k_ge_G_quarter", false); });
  add("half_mix_ge_G_quarter",
      [&] { return claim_mix_family("half_mix_ge_G_quarter", true); });
  add("concavity_xi_3_4", [&] { return claim_concavity(opt); });
  add("endpoint_chain", [&] { return bounds::check_endpoint_value(); });
  add("L_max_sqrt3", [&] { return claim_L_max(opt); });
  add("bd_sharpness", [&] {
    return rename(search::verify_bd_batch(opt.trials_bd,
                                          {std::sqrt(2.0), 1.6, 2.0, 3.0}, opt.seed, opt.cfg),
                  "bd_sharpness");
  });
  add("lemma2_quarter", [&] {
    return rename(search::verify_lemma2_batch(0.25, opt.trials_lemma2, opt.seed, opt.cfg),
                  "lemma2_quarter");
  });
  add("lemma2_2_7", [&] {
    return rename(search::verify_lemma2_batch(2.0 / 7.0, opt.trials_lemma2, opt.seed, opt.cfg),
                  "lemma2_2_7");
  });
  add("theorem_batch", [&] {
    return search::verify_theorem_batch(opt.trials_theorem, 20, opt.seed, opt.cfg);
  });
  add("stopping_certificates", [&] { return claim_stopping_certificates(opt); });
  return out;
}

// ---------------------------------------------------------------------------
// command execution

namespace {

void emit(const RunConfig& cfg, std::ostream& out, const nlohmann::json& j,
          const std::string& text) {
  if (cfg.format == OutputFormat::json)
    out << j.dump(2) << "\n";
  else
    out << text;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  return f;
}

int run_bounds(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.eval.empty()) {
    const auto& name = cfg.eval.front();
    auto arg = [&](std::size_t i) {
      if (i >= cfg.eval.size()) throw std::runtime_error("--eval " + name + ": missing argument");
      char* end = nullptr;
      double v = std::strtod(cfg.eval[i].c_str(), &end);
      if (auto r = Rational::parse(cfg.eval[i])) v = r->value();
      else if (end == cfg.eval[i].c_str() || *end != '\0')
        throw std::runtime_error("--eval: malformed argument '" + cfg.eval[i] + "'");
      return v;
    };
    double v = 0.0;
    if (name == "G") v = bounds::eval_G(arg(1));
    else if (name == "F") v = bounds::eval_F(arg(1));
    else if (name == "H") v = bounds::eval_H(arg(1));
    else if (name == "L") v = bounds::eval_L(arg(1));
    else if (name == "h") v = bounds::eval_h(static_cast<int>(arg(1)));
    else if (name == "halfmix") v = bounds::eval_half_mix(static_cast<int>(arg(1)));
    else if (name == "U") v = bounds::eval_U(static_cast<int>(arg(1)), arg(2));
    else if (name == "Z") v = bounds::eval_Z(arg(1), arg(2));
    else if (name == "bd") v = bounds::bd_tail_bound(arg(1));
    else if (name == "Phi") v = numerics::std_normal_cdf(arg(1));
    else if (name == "Phibar") v = numerics::std_normal_upper_tail(arg(1));
    else if (name == "phi") v = numerics::std_normal_pdf(arg(1));
    else throw std::runtime_error("--eval: unknown function '" + name + "'");

    std::ostringstream text;
    text << std::setprecision(15) << v << "\n";
    emit(cfg, out, envelope("bounds", cfg.seed, {{{"eval", cfg.eval}, {"value", v}}}),
         text.str());
    return 0;
  }

  auto t = bounds::make_bound_table();
  std::ostringstream text;
  text << std::setprecision(15)
       << "G(1/4)         = " << t.G_quarter << "\n"
       << "F(1/4)         = " << t.F_quarter << "\n"
       << "c*             = " << t.c_star << "\n"
       << "Phibar(sqrt2)  = " << t.phi_bar_sqrt2 << "\n";
  emit(cfg, out, envelope("bounds", cfg.seed, t.to_json()), text.str());
  return 0;
}

int run_dist(const RunConfig& cfg, std::ostream& out) {
  if (cfg.weights_path.empty()) throw std::runtime_error("dist: --weights is required");
  WeightVector w = WeightVector::load_file(cfg.weights_path);

  auto report_prob = [&](const std::string& what, const ExactProbability& p) {
    std::ostringstream text;
    text << what << ": " << p.numerator << "/" << p.denominator << " = "
         << std::setprecision(15) << p.float_value;
    if (p.boundary_resolved > 0)
      text << "   [" << p.boundary_resolved << " boundary-resolved outcomes]";
    text << (p.exact ? "   (exact)" : "   (float engine)") << "\n";
    emit(cfg, out, envelope("dist", cfg.seed, {{{"query", what}, {"prob", prob_json(p)}}}),
         text.str());
  };

  if (cfg.interval) {
    Bound lo = parse_bound(cfg.interval->first);
    Bound hi = parse_bound(cfg.interval->second);
    report_prob("P(S in [" + cfg.interval->first + ", " + cfg.interval->second + "])",
                dist::prob_in_interval(w, lo, hi, cfg.engine, cfg.caps));
    return 0;
  }
  if (cfg.tail) {
    report_prob("P(S >= " + *cfg.tail + ")",
                dist::tail_prob(w, parse_bound(*cfg.tail), cfg.engine, cfg.caps));
    return 0;
  }
  if (cfg.shift) {
    Bound b = parse_bound(*cfg.shift);
    ExactProbability p;
    if (b.kind() == Bound::Kind::rational)
      p = dist::shifted_prob(b.rat(), w, cfg.engine, cfg.caps);
    else
      p = dist::shifted_prob(b.value(), w, cfg.engine, cfg.caps);
    report_prob("P(|" + *cfg.shift + " + Y| <= 1)", p);
    return 0;
  }

  auto d = dist::enumerate_naive(w, cfg.caps);
  if (cfg.format == OutputFormat::csv) {
    d.write_csv(out);
    return 0;
  }
  if (cfg.format == OutputFormat::json) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : d.atoms) atoms.push_back({{"value", a.value}, {"count", a.count}});
    out << envelope("dist", cfg.seed, {{{"n", d.n}, {"atoms", atoms}}}).dump(2) << "\n";
    return 0;
  }
  out << "n = " << d.n << ", " << d.atoms.size() << " atoms, 2^n = " << d.total() << "\n";
  for (const auto& a : d.atoms)
    out << std::setw(22) << std::setprecision(15) << a.value << "  " << a.count << "\n";
  return 0;
}

int run_stopping(const RunConfig& cfg, std::ostream& out) {
  if (cfg.weights_path.empty()) throw std::runtime_error("stopping: --weights is required");
  WeightVector w = WeightVector::load_file(cfg.weights_path);
  auto cert = stopping::theorem_certificate(w, cfg.caps);
  if (cfg.format == OutputFormat::text) {
    print_constant_header(out);
    out << "n = " << cert.n << "  K = " << cert.K << "  branch " << cert.branch << "\n";
    for (const auto& [i, t] : cert.per_T)
      out << "  T=" << i << ": count " << t.count << ", cond " << std::setprecision(10)
          << t.cond_prob.float_value << " >= bound " << t.bound << " (margin "
          << t.margin << ")\n";
    out << "final P(|S|<=1) = " << cert.final_prob.float_value
        << " >= G(1/4) = " << cert.final_bound << " : " << (cert.pass ? "PASS" : "FAIL")
        << "\n";
  } else {
    out << envelope("stopping", cfg.seed, cert.to_json()).dump(2) << "\n";
  }
  return cert.pass ? 0 : 1;
}

int run_suite(const RunConfig& cfg, std::ostream& out, const char* command) {
  SuiteOptions opt;
  opt.seed = cfg.seed;
  opt.grid_step = cfg.grid_step;
  opt.cfg = cfg.caps;
  if (cfg.trials > 0) {
    opt.trials_theorem = cfg.trials;
    opt.trials_lemma2 = cfg.trials;
    opt.trials_bd = cfg.trials;
    opt.instances_stopping = std::min(cfg.trials, 500);
  }
  auto reports = run_claim_suite(opt, cfg.claims);
  if (reports.empty()) throw std::runtime_error("no matching claims");

  bool all_pass = true;
  for (const auto& r : reports) all_pass &= r.pass;

  if (cfg.format == OutputFormat::json) {
    out << envelope(command, cfg.seed, reports_to_json(reports)).dump(2) << "\n";
  } else if (cfg.format == OutputFormat::csv) {
    out << "claim_id,pass,margin\n";
    for (const auto& r : reports)
      out << r.claim_id << ',' << (r.pass ? 1 : 0) << ',' << std::setprecision(17) << r.margin
          << "\n";
  } else {
    print_constant_header(out);
    for (const auto& r : reports) {
      out << (r.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(24) << r.claim_id
          << std::right << "  margin " << std::setprecision(6) << r.margin;
      if (!r.applicable) out << "  (not applicable)";
      out << "\n";
    }
    out << (all_pass ? "all claims pass\n" : "CLAIM FAILURES PRESENT\n");
  }
  return all_pass ? 0 : 1;
}

int run_search(const RunConfig& cfg, std::ostream& out) {
  auto res = search::minimize_prob(cfg.search_n, cfg.restarts, cfg.seed, cfg.caps);
  if (cfg.format == OutputFormat::text) {
    print_constant_header(out);
    out << "best P(|S|<=1) = " << res.best_prob.numerator << "/" << res.best_prob.denominator
        << " = " << std::setprecision(15) << res.best_prob.float_value << " after "
        << res.evaluations << " evaluations\nweights:";
    for (double v : res.best_weights.values()) out << " " << v;
    out << "\n";
  } else {
    out << envelope("search", cfg.seed, res.to_json()).dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::bounds: return run_bounds(cfg, out);
    case Command::dist: return run_dist(cfg, out);
    case Command::stopping: return run_stopping(cfg, out);
    case Command::verify: return run_suite(cfg, out, "verify");
    case Command::report: return run_suite(cfg, out, "report");
    case Command::search: return run_search(cfg, out);
  }
  return 2;
}

int main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* env = std::getenv("SSL_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') cfg.seed = v;
  }

  CLI::App app{"exact signed-sum distributions and Rademacher tail bound checks"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string engine = "auto";
  std::vector<std::string> interval;
  std::string out_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed (SSL_SEED env overrides the default)");
    sub->add_option("--format", format, "output format: text|json|csv");
    sub->add_option("--out", out_path, "write the report to a file instead of stdout");
    sub->add_option("--threads", cfg.caps.threads, "parallelism cap (results are identical)");
    sub->add_option("--naive-cap", cfg.caps.naive_cap, "max n for full enumeration");
    sub->add_option("--mim-cap", cfg.caps.mim_cap, "max n for meet-in-the-middle");
    sub->add_option("--path-cap", cfg.caps.path_cap, "max n for path enumeration");
  };

  auto* b = app.add_subcommand("bounds", "evaluate the bound functions / constant table");
  b->add_option("--eval", cfg.eval, "function name and arguments, e.g. --eval G 0.25")
      ->expected(2, 3);
  b->add_flag("--table", cfg.show_table, "print the constant table");
  add_common(b);

  auto* d = app.add_subcommand("dist", "exact signed-sum distribution queries");
  d->add_option("--weights", cfg.weights_path, "weights file (one per line)");
  d->add_option("--interval", interval, "closed interval LO HI")->expected(2);
  std::string tail_tok, shift_tok;
  auto* tail_opt = d->add_option("--tail", tail_tok, "tail threshold: P(S >= t)");
  auto* shift_opt = d->add_option("--shift", shift_tok, "shift x: P(|x + Y| <= 1)");
  d->add_option("--engine", engine, "naive|mim|auto");
  add_common(d);

  auto* st = app.add_subcommand("stopping", "stopping-time certificate for an instance");
  st->add_option("--weights", cfg.weights_path, "weights file (one per line)");
  add_common(st);

  auto* v = app.add_subcommand("verify", "run verification claims");
  bool all_claims = false;
  v->add_flag("--all", all_claims, "run the complete claim suite");
  v->add_option("--claims", cfg.claims, "comma-separated claim ids")->delimiter(',');
  v->add_option("--trials", cfg.trials, "override per-claim trial counts");
  v->add_option("--grid-step", cfg.grid_step, "grid step for the inequality scans");
  add_common(v);

  auto* rp = app.add_subcommand("report", "canonical claim suite with defaults");
  rp->add_option("--trials", cfg.trials, "override per-claim trial counts");
  rp->add_option("--grid-step", cfg.grid_step, "grid step for the inequality scans");
  add_common(rp);

  auto* se = app.add_subcommand("search", "extremal search minimizing P(|S|<=1)");
  se->add_option("--n", cfg.search_n, "dimension")->required();
  se->add_option("--restarts", cfg.restarts, "random restarts");
  add_common(se);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (format == "text") cfg.format = OutputFormat::text;
  else if (format == "json") cfg.format = OutputFormat::json;
  else if (format == "csv") cfg.format = OutputFormat::csv;
  else {
    std::cerr << "unknown format: " << format << "\n";
    return 2;
  }
  if (engine == "auto") cfg.engine = dist::Engine::automatic;
  else if (engine == "naive") cfg.engine = dist::Engine::naive;
  else if (engine == "mim") cfg.engine = dist::Engine::mim;
  else {
    std::cerr << "unknown engine: " << engine << "\n";
    return 2;
  }
  if (!interval.empty()) cfg.interval = std::make_pair(interval[0], interval[1]);
  if (tail_opt->count() > 0) cfg.tail = tail_tok;
  if (shift_opt->count() > 0) cfg.shift = shift_tok;
  cfg.out_path = out_path;

  if (b->parsed()) cfg.command = Command::bounds;
  else if (d->parsed()) cfg.command = Command::dist;
  else if (st->parsed()) cfg.command = Command::stopping;
  else if (v->parsed()) cfg.command = Command::verify;
  else if (rp->parsed()) cfg.command = Command::report;
  else if (se->parsed()) cfg.command = Command::search;

  try {
    if (!cfg.out_path.empty()) {
      auto f = open_out(cfg.out_path);
      return run(cfg, f);
    }
    return run(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace radsum::cli
