#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "radsum/errors.hpp"
#include "radsum/rational.hpp"
#include "radsum/weights.hpp"

namespace radsum::dist {

/// An exactly counted probability: numerator sign vectors out of
/// `denominator` (2^n for unconditional queries, the conditioning count for
/// conditionals). `boundary_resolved` counts the outcomes whose membership
/// was decided inside the closed-boundary window; it is zero whenever the
/// query ran on an exact engine (`exact` == true).
struct ExactProbability {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double float_value = 0.0;
  std::uint64_t boundary_resolved = 0;
  bool exact = true;
};

struct DistAtom {
  double value = 0.0;
  std::uint64_t count = 0;
};

/// The full distribution of S = sum eps_i v_i as sorted (value, count) atoms
/// whose counts add up to exactly 2^n.
struct SignedSumDistribution {
  std::vector<DistAtom> atoms;
  int n = 0;

  std::uint64_t total() const { return std::uint64_t{1} << n; }
  /// CSV with header value,count,prob.
  void write_csv(std::ostream& out) const;
};

enum class Engine { naive, mim, automatic };

struct DistConfig {
  int naive_cap = 26;          // max n for full 2^n enumeration
  int mim_cap = 50;            // max n for meet-in-the-middle counting
  int path_cap = 22;           // max n for exhaustive sign-path analysis
  double merge_eps = 1e-12;    // float-mode atom merging tolerance
  double boundary_eps = 1e-9;  // closed-interval boundary window
  int threads = 1;
};

/// A closed-interval endpoint. Exact kinds (rational, sign*sqrt(rational))
/// let the exact engines decide membership with integer arithmetic; plain
/// doubles go through the boundary-window comparison.
class Bound {
 public:
  enum class Kind { minus_infinity, plus_infinity, rational, sqrt_rational, floating };

  static Bound minus_infinity();
  static Bound plus_infinity();
  static Bound exact(const Rational& r);
  /// sign * sqrt(r) with r >= 0; sign in {-1, +1}.
  static Bound exact_sqrt(int sign, const Rational& r);
  /// Exact dyadic rational when the double fits one, else a floating bound.
  static Bound from_double(double x);
  static Bound approx(double x);

  Kind kind() const { return kind_; }
  const Rational& rat() const { return rat_; }
  int sqrt_sign() const { return sign_; }
  /// Double approximation (+-infinity for the infinite kinds).
  double value() const { return value_; }
  bool finite() const {
    return kind_ != Kind::minus_infinity && kind_ != Kind::plus_infinity;
  }

 private:
  Bound(Kind k, Rational r, int sign, double v) : kind_(k), rat_(r), sign_(sign), value_(v) {}
  Kind kind_;
  Rational rat_;
  int sign_;
  double value_;
};

/// Exhaustive 2^n enumeration of the distribution. Equal values merge
/// exactly on the exact engines; float values merge within merge_eps.
SignedSumDistribution enumerate_naive(const WeightVector& w, const DistConfig& cfg = {});

/// Exact count of sign vectors with lo <= S <= hi over 2^n.
ExactProbability prob_in_interval(const WeightVector& w, const Bound& lo, const Bound& hi,
                                  Engine engine = Engine::automatic,
                                  const DistConfig& cfg = {});
ExactProbability prob_in_interval(const WeightVector& w, double lo, double hi,
                                  Engine engine = Engine::automatic,
                                  const DistConfig& cfg = {});

/// Exact P(S >= t).
ExactProbability tail_prob(const WeightVector& w, const Bound& t,
                           Engine engine = Engine::automatic, const DistConfig& cfg = {});
ExactProbability tail_prob(const WeightVector& w, double t,
                           Engine engine = Engine::automatic, const DistConfig& cfg = {});

/// Exact P(|x + Y| <= 1) for Y = sum eps_i v_i; requires |x| <= 1.
ExactProbability shifted_prob(double x, const WeightVector& w,
                              Engine engine = Engine::automatic, const DistConfig& cfg = {});
ExactProbability shifted_prob(const Rational& x, const WeightVector& w,
                              Engine engine = Engine::automatic, const DistConfig& cfg = {});

}  // namespace radsum::dist
