#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "radsum/dist.hpp"
#include "radsum/report.hpp"
#include "radsum/weights.hpp"

namespace radsum::stopping {

/// Weights rearranged into the zigzag order
///   v_n >= v_1 >= v_{n-1} >= v_2 >= v_3 >= ... >= v_{n-2} >= 0,
/// zero-padded so that n >= 4. Signs of negative inputs are absorbed into
/// the Rademacher variables and recorded in sign_flip.
struct CanonicalOrdering {
  WeightVector ordered;
  std::vector<int> permutation;  // canonical position -> original index, -1 for padding
  std::vector<int> sign_flip;    // +1, or -1 when the original weight was negative
  int padded_zeros = 0;

  int n() const { return static_cast<int>(ordered.size()); }
};

CanonicalOrdering canonical_reorder(const WeightVector& w);

/// K = min{t <= n-1 : M_t > 1 - v_{t+1}} (else n-1), with M_t the all-plus
/// prefix sums. Deterministic in the weights.
int compute_K(const CanonicalOrdering& c);

struct StopResult {
  int T = 0;
  double X_T = 0.0;
};

/// The stopping time T = min{t <= n-1 : |X_t| > 1 - v_{t+1}} (else n-1) and
/// the stopped prefix sum, for one sign path.
StopResult compute_T(const CanonicalOrdering& c, const std::vector<int>& signs);

struct PathRecord {
  std::uint32_t signs = 0;  // bit i set means eps_{i+1} = -1
  int T = 0;
  double X_T = 0.0;
  double tail_norm_sq = 0.0;  // sum_{i > T} v_i^2
};

struct StoppingProfile {
  int n = 0;
  int K = 0;
  std::vector<double> prefix_sums;  // M_1..M_n
  std::vector<PathRecord> paths;    // all 2^n sign paths
};

StoppingProfile build_stopping_profile(const CanonicalOrdering& c,
                                       const dist::DistConfig& cfg = {});

/// Per-path quantities of the variance-bound derivation, computed from
/// (K, T, |X_T|).
struct CaseDiagnostics {
  double lambda = 0.0;
  double B1 = 0.0;
  double B2 = 0.0;
  double B_mix = 0.0;
  double K0 = 0.0;  // X_T / (1 - X_T); +inf flagged below when X_T = 1
  bool K0_infinite = false;
  enum class Case { case12, case3, case4 };
  Case bound_used = Case::case12;
  double U_value = 0.0;
};

CaseDiagnostics make_case_diagnostics(int K, int T, double abs_x_t, int n);

/// For K <= n-4: T = K exactly on the paths whose first K signs agree
/// (so P(T=K) = 2^{1-K}) and no path stops at K+1. For K = n-3 only the
/// P(T=K) part applies; for K >= n-2 the rule is reported not-applicable.
VerificationReport verify_all_equal_signs_rule(const CanonicalOrdering& c,
                                               const dist::DistConfig& cfg = {});

/// Checks, for every sign path with T <= n-3 and x = |X_T|:
/// the case inequality sum_{i>T} v_i^2 <= U*(1+x)^2, the prefix chain
/// sum_{i<=T} v_i^2 >= min(B1,B2), the lambda-mixing identity, and the
/// B1 >= B2 <=> x >= K/(K+1) ordering.
VerificationReport verify_variance_bounds(const CanonicalOrdering& c,
                                          const dist::DistConfig& cfg = {});

/// Exact P(|S| <= 1 | T = i) by exhaustive path enumeration grouped by T.
/// Throws undefined_conditional_error when P(T = i) = 0.
dist::ExactProbability conditional_prob_given_T(const CanonicalOrdering& c, int i,
                                                const dist::DistConfig& cfg = {});

/// The whole case assembly on one instance: per-T conditional bounds, the
/// branch mixture, and the final floor P(|S| <= 1) >= G(1/4).
struct TheoremCertificate {
  int n = 0;
  int K = 0;
  std::string branch;  // "K<=n-4", "K==n-3", or "K>=n-2"
  struct PerT {
    std::uint64_t count = 0;
    dist::ExactProbability cond_prob;
    double bound = 0.0;
    double margin = 0.0;
  };
  std::map<int, PerT> per_T;
  dist::ExactProbability final_prob;
  double final_bound = 0.0;    // G(1/4)
  double mixture_bound = 0.0;  // h(K), half-mix(K), or 1/2 depending on branch
  double mixture_value = 0.0;  // attained conditional probability on the branch region
  std::uint64_t t_eq_K_count = 0;
  std::uint64_t t_eq_K_plus_1_count = 0;
  bool structure_ok = false;  // branch bookkeeping (path counts) verified
  bool pass = false;

  nlohmann::json to_json() const;
};

TheoremCertificate theorem_certificate(const WeightVector& w, const dist::DistConfig& cfg = {});

}  // namespace radsum::stopping
