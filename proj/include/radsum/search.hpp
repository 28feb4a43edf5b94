#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "radsum/dist.hpp"
#include "radsum/report.hpp"
#include "radsum/weights.hpp"

namespace radsum::search {

enum class Style { uniform_sphere, sparse, two_block, equal };

Style style_from_string(const std::string& s);
std::string style_name(Style s);

struct InstanceGenerator {
  int n = 0;
  std::uint64_t seed = 42;
  Style style = Style::uniform_sphere;
};

/// Unit-norm weights, deterministic in (seed, n, style). style=equal uses
/// squared-rational ingestion (v_i^2 = 1/n exactly); the others are float.
WeightVector random_unit_weights(const InstanceGenerator& gen);

/// Exact P(|S| <= 1) for n equal weights 1/sqrt(n), by the binomial route:
/// counts sign vectors with (n - 2b)^2 <= n.
dist::ExactProbability equal_weights_interval_prob(int n);

/// Samples random unit-norm instances (plus the equal-weights family) and
/// reports the minimum exact P(|S| <= 1) against the G(1/4) floor.
VerificationReport verify_theorem_batch(int trials, int n_max, std::uint64_t seed,
                                        const dist::DistConfig& cfg = {});

/// Samples (x, w) with |x| <= 1 and sigma^2 <= U (1+|x|)^2 and checks the
/// shifted probability against G(U). Requires 0 < U <= 1/2.
VerificationReport verify_lemma2_batch(double U, int trials, std::uint64_t seed,
                                       const dist::DistConfig& cfg = {});

/// Checks exact tails P(Y >= y) against the c* Phibar(y) majorant on a grid
/// of y >= sqrt(2), plus the two-point sharpness witness at y = sqrt(2).
VerificationReport verify_bd_batch(int trials, const std::vector<double>& y_grid,
                                   std::uint64_t seed, const dist::DistConfig& cfg = {});

struct SearchResult {
  WeightVector best_weights;
  dist::ExactProbability best_prob;
  int restarts = 0;
  long evaluations = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

/// Local search for small P(|S| <= 1) on the unit sphere: random restarts,
/// coordinate-pair rotations on a decreasing angle schedule, accepting only
/// strict decreases of the exact inside-count. Deterministic for fixed seed.
SearchResult minimize_prob(int n, int restarts, std::uint64_t seed,
                           const dist::DistConfig& cfg = {});

}  // namespace radsum::search
