#include "radsum/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "radsum/bounds.hpp"
#include "radsum/errors.hpp"
#include "radsum/rng.hpp"

namespace radsum::search {

using dist::Bound;
using dist::DistConfig;
using dist::Engine;
using dist::ExactProbability;

Style style_from_string(const std::string& s) {
  if (s == "uniform-sphere" || s == "uniform") return Style::uniform_sphere;
  if (s == "sparse") return Style::sparse;
  if (s == "two-block") return Style::two_block;
  if (s == "equal") return Style::equal;
  throw std::domain_error("unknown instance style: " + s);
}

std::string style_name(Style s) {
  switch (s) {
    case Style::uniform_sphere: return "uniform-sphere";
    case Style::sparse: return "sparse";
    case Style::two_block: return "two-block";
    case Style::equal: return "equal";
  }
  return "?";
}

namespace {

std::vector<double> normalized(std::vector<double> v) {
  long double nsq = 0.0L;
  for (double x : v) nsq += static_cast<long double>(x) * x;
  if (nsq == 0.0L) throw std::domain_error("cannot normalize the zero vector");
  long double s = std::sqrt(nsq);
  for (double& x : v) x = static_cast<double>(x / s);
  return v;
}

}  // namespace

WeightVector random_unit_weights(const InstanceGenerator& gen) {
  if (gen.n < 1) throw std::domain_error("random_unit_weights: n >= 1");
  if (gen.style == Style::equal) {
    std::vector<Rational> squares(static_cast<std::size_t>(gen.n), Rational(1, gen.n));
    return WeightVector::from_squared_rationals(squares);
  }
  if (gen.n == 1) return WeightVector::from_doubles({1.0});

  Rng rng(splitmix64(gen.seed ^ splitmix64(static_cast<std::uint64_t>(gen.n))));
  std::vector<double> v(static_cast<std::size_t>(gen.n), 0.0);
  switch (gen.style) {
    case Style::uniform_sphere: {
      for (auto& x : v) x = rng.gaussian();
      break;
    }
    case Style::sparse: {
      int nz = static_cast<int>(rng.uniform_int(1, std::max(1, gen.n / 3)));
      for (int k = 0; k < nz; ++k) {
        auto i = static_cast<std::size_t>(rng.uniform_int(0, gen.n - 1));
        v[i] = rng.gaussian();
      }
      bool all_zero = true;
      for (double x : v) all_zero &= x == 0.0;
      if (all_zero) v[0] = 1.0;
      break;
    }
    case Style::two_block: {
      int k = static_cast<int>(rng.uniform_int(1, gen.n - 1));
      double theta = rng.uniform(0.0, 1.5707963267948966);
      double a = std::cos(theta) / std::sqrt(static_cast<double>(k));
      double b = std::sin(theta) / std::sqrt(static_cast<double>(gen.n - k));
      for (int i = 0; i < gen.n; ++i) v[static_cast<std::size_t>(i)] = i < k ? a : b;
      break;
    }
    case Style::equal:
      break;  // handled above
  }
  return WeightVector::from_doubles(normalized(std::move(v)));
}

ExactProbability equal_weights_interval_prob(int n) {
  if (n < 1 || n > 62) throw std::domain_error("equal_weights_interval_prob: 1 <= n <= 62");
  // |S| = |n - 2b| / sqrt(n) <= 1  <=>  (n - 2b)^2 <= n
  std::int64_t r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;  // r = floor(sqrt(n))
  // exact binomial coefficients via the multiplicative recurrence
  std::vector<std::uint64_t> binom(static_cast<std::size_t>(n) + 1);
  binom[0] = 1;
  for (int b = 1; b <= n; ++b) {
    // C(n, b) = C(n, b-1) * (n - b + 1) / b, always divisible at each step
    unsigned __int128 t = static_cast<unsigned __int128>(binom[static_cast<std::size_t>(b - 1)]) *
                          static_cast<unsigned __int128>(n - b + 1);
    binom[static_cast<std::size_t>(b)] = static_cast<std::uint64_t>(t / static_cast<unsigned>(b));
  }
  std::uint64_t inside = 0;
  for (int b = 0; b <= n; ++b) {
    std::int64_t m = static_cast<std::int64_t>(n) - 2 * b;
    if (m * m <= n) inside += binom[static_cast<std::size_t>(b)];
  }
  ExactProbability p;
  p.numerator = inside;
  p.denominator = std::uint64_t{1} << n;
  p.float_value = static_cast<double>(inside) / static_cast<double>(p.denominator);
  return p;
}

VerificationReport verify_theorem_batch(int trials, int n_max, std::uint64_t seed,
                                        const DistConfig& cfg) {
  if (n_max < 2 || n_max > 26)
    throw std::domain_error("verify_theorem_batch: 2 <= n_max <= 26");
  const double floor_value = bounds::eval_G(0.25);

  double min_prob = std::numeric_limits<double>::infinity();
  nlohmann::json witness;
  bool equal_matches_binomial = true;

  Rng master(seed);
  const Style styles[3] = {Style::uniform_sphere, Style::sparse, Style::two_block};
  for (int t = 0; t < trials; ++t) {
    Rng trial = master.fork(static_cast<std::uint64_t>(t));
    int n = static_cast<int>(trial.uniform_int(2, n_max));
    InstanceGenerator gen{n, trial.next_u64(), styles[t % 3]};
    WeightVector w = random_unit_weights(gen);
    ExactProbability p = dist::prob_in_interval(w, -1.0, 1.0, Engine::automatic, cfg);
    if (p.float_value < min_prob) {
      min_prob = p.float_value;
      witness = {{"trial", t}, {"n", n}, {"style", style_name(gen.style)},
                 {"prob", p.float_value}};
    }
  }
  for (int n = 2; n <= std::min(n_max, 20); ++n) {
    InstanceGenerator gen{n, seed, Style::equal};
    WeightVector w = random_unit_weights(gen);
    ExactProbability p = dist::prob_in_interval(w, -1.0, 1.0, Engine::automatic, cfg);
    ExactProbability oracle = equal_weights_interval_prob(n);
    if (p.numerator != oracle.numerator || p.denominator != oracle.denominator)
      equal_matches_binomial = false;
    if (p.float_value < min_prob) {
      min_prob = p.float_value;
      witness = {{"equal_n", n}, {"prob", p.float_value}};
    }
  }

  VerificationReport r;
  r.claim_id = "theorem_batch";
  r.margin = min_prob - floor_value;
  r.pass = r.margin >= 0.0 && equal_matches_binomial;
  r.worst_point = witness;
  r.grid_spec = std::to_string(trials) + " trials, n in [2," + std::to_string(n_max) +
                "], seed " + std::to_string(seed);
  r.details["min_prob"] = min_prob;
  r.details["floor_G_quarter"] = floor_value;
  r.details["equal_matches_binomial"] = equal_matches_binomial ? 1.0 : 0.0;
  return r;
}

VerificationReport verify_lemma2_batch(double U, int trials, std::uint64_t seed,
                                       const DistConfig& cfg) {
  if (!(U > 0.0) || U > 0.5)
    throw std::domain_error("verify_lemma2_batch: requires 0 < U <= 1/2");
  const double floor_value = bounds::eval_G(U);

  double min_margin = std::numeric_limits<double>::infinity();
  nlohmann::json witness;
  Rng master(seed);
  for (int t = 0; t < trials; ++t) {
    Rng trial = master.fork(static_cast<std::uint64_t>(t));
    double x = trial.uniform(-1.0, 1.0);
    double prob;
    int n;
    if (t == 0) {
      // degenerate sigma = 0: all-zero weights, P(|x + 0| <= 1) = 1
      n = 4;
      WeightVector w = WeightVector::from_doubles({0.0, 0.0, 0.0, 0.0});
      prob = dist::shifted_prob(x, w, Engine::automatic, cfg).float_value;
    } else {
      n = static_cast<int>(trial.uniform_int(1, 14));
      std::vector<double> dir(static_cast<std::size_t>(n));
      for (auto& d : dir) d = trial.gaussian();
      dir = normalized(std::move(dir));
      // scale uniformly up to the constraint boundary sigma = sqrt(U)(1+|x|)
      double sigma = std::sqrt(U) * (1.0 + std::fabs(x)) * trial.uniform01();
      for (auto& d : dir) d *= sigma;
      WeightVector w = WeightVector::from_doubles(dir);
      prob = dist::shifted_prob(x, w, Engine::automatic, cfg).float_value;
    }
    double margin = prob - floor_value;
    if (margin < min_margin) {
      min_margin = margin;
      witness = {{"trial", t}, {"x", x}, {"n", n}, {"prob", prob}};
    }
  }

  VerificationReport r;
  r.claim_id = U == 0.25 ? "lemma2_quarter" : "lemma2_batch";
  r.margin = min_margin;
  r.pass = min_margin > 0.0;
  r.worst_point = witness;
  r.grid_spec = std::to_string(trials) + " trials, U = " + std::to_string(U) + ", seed " +
                std::to_string(seed);
  r.details["G_U"] = floor_value;
  r.details["min_margin"] = min_margin;
  return r;
}

VerificationReport verify_bd_batch(int trials, const std::vector<double>& y_grid,
                                   std::uint64_t seed, const DistConfig& cfg) {
  const double sqrt2 = std::sqrt(2.0);
  for (double y : y_grid)
    if (!(y >= sqrt2 - 1e-12))
      throw std::domain_error("verify_bd_batch: grid points must be >= sqrt(2)");

  double max_ratio = -std::numeric_limits<double>::infinity();
  nlohmann::json witness;

  // sharpness witness: two weights sqrt(1/2), tail at exactly sqrt(2)
  WeightVector two_point =
      WeightVector::from_squared_rationals({Rational(1, 2), Rational(1, 2)});
  ExactProbability sharp =
      dist::tail_prob(two_point, Bound::exact_sqrt(1, Rational(2, 1)), Engine::naive, cfg);
  double sharp_bound = bounds::bd_tail_bound(sqrt2);
  double sharp_ratio = sharp.float_value / sharp_bound;
  max_ratio = sharp_ratio;
  witness = {{"instance", "two-point"}, {"y", "sqrt(2)"}, {"ratio", sharp_ratio}};

  Rng master(seed);
  const Style styles[3] = {Style::uniform_sphere, Style::sparse, Style::two_block};
  for (int t = 0; t < trials; ++t) {
    Rng trial = master.fork(static_cast<std::uint64_t>(t));
    int n = static_cast<int>(trial.uniform_int(2, 14));
    InstanceGenerator gen{n, trial.next_u64(), styles[t % 3]};
    WeightVector w = random_unit_weights(gen);
    for (double y : y_grid) {
      ExactProbability p = dist::tail_prob(w, y, Engine::automatic, cfg);
      double bound = bounds::bd_tail_bound(y);
      double ratio = p.float_value / bound;
      if (ratio > max_ratio) {
        max_ratio = ratio;
        witness = {{"trial", t}, {"n", n}, {"style", style_name(gen.style)},
                   {"y", y}, {"tail", p.float_value}, {"bound", bound}};
      }
    }
  }

  VerificationReport r;
  r.claim_id = "bd_bound";
  r.margin = 1.0 - max_ratio;
  r.pass = max_ratio <= 1.0 + 1e-12 && std::fabs(sharp.float_value - 0.25) == 0.0 &&
           std::fabs(sharp_bound - 0.25) <= 1e-10;
  r.worst_point = witness;
  r.grid_spec = std::to_string(trials) + " trials, " + std::to_string(y_grid.size()) +
                " grid points, seed " + std::to_string(seed);
  r.details["max_ratio"] = max_ratio;
  r.details["sharp_tail"] = sharp.float_value;
  r.details["sharp_bound"] = sharp_bound;
  return r;
}

nlohmann::json SearchResult::to_json() const {
  nlohmann::json w = nlohmann::json::array();
  for (double v : best_weights.values()) w.push_back(v);
  return {{"best_weights", w},
          {"best_prob",
           {{"numerator", best_prob.numerator},
            {"denominator", best_prob.denominator},
            {"value", best_prob.float_value}}},
          {"restarts", restarts},
          {"evaluations", evaluations},
          {"seed", seed}};
}

SearchResult minimize_prob(int n, int restarts, std::uint64_t seed, const DistConfig& cfg) {
  if (n < 1 || n > 20) throw std::domain_error("minimize_prob: 1 <= n <= 20");
  if (restarts < 1) throw std::domain_error("minimize_prob: restarts >= 1");

  long evaluations = 0;
  auto evaluate = [&](const WeightVector& w) {
    ++evaluations;
    return dist::prob_in_interval(w, -1.0, 1.0, Engine::automatic, cfg);
  };

  std::vector<double> best_v(static_cast<std::size_t>(n), 0.0);
  best_v[0] = 1.0;
  ExactProbability best_p = evaluate(WeightVector::from_doubles(best_v));

  Rng master(seed);
  for (int r = 0; r < restarts; ++r) {
    Rng rng = master.fork(static_cast<std::uint64_t>(r));
    std::vector<double> cur(static_cast<std::size_t>(n));
    if (n == 1) {
      cur[0] = 1.0;
    } else {
      for (auto& x : cur) x = rng.gaussian();
      cur = normalized(std::move(cur));
    }
    ExactProbability cur_p = evaluate(WeightVector::from_doubles(cur));

    if (n >= 2) {
      for (double theta = 0.5; theta > 1e-3; theta *= 0.7) {
        double c = std::cos(theta), s = std::sin(theta);
        for (int attempt = 0; attempt < 3 * n; ++attempt) {
          auto i = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
          auto j = static_cast<std::size_t>(rng.uniform_int(0, n - 2));
          if (j >= i) ++j;
          std::vector<double> cand = cur;
          cand[i] = c * cur[i] - s * cur[j];
          cand[j] = s * cur[i] + c * cur[j];
          cand = normalized(std::move(cand));
          ExactProbability cand_p = evaluate(WeightVector::from_doubles(cand));
          // the objective is a count: accept only strict integer decreases
          if (cand_p.numerator < cur_p.numerator) {
            cur = std::move(cand);
            cur_p = cand_p;
          }
        }
      }
    }
    if (cur_p.numerator < best_p.numerator) {
      best_v = cur;
      best_p = cur_p;
    }
  }

  if (best_p.float_value < bounds::eval_G(0.25))
    throw std::logic_error("minimize_prob: found P(|S|<=1) below G(1/4); "
                           "this contradicts the verified floor and indicates a bug");

  return SearchResult{WeightVector::from_doubles(best_v), best_p, restarts, evaluations, seed};
}

}  // namespace radsum::search
