#pragma once

// Internal enumeration engines shared by dist and stopping. Three modes:
//  - rational:     every weight is a_i / L over one int64 denominator; sums
//                  are int64 and every comparison is integer-exact.
//  - sqrt_single:  every weight is coeff_i * sqrt(r) for one rational r >= 0
//                  (the equal-weights family plus zero padding); sums are the
//                  integer coefficient m, compared by squaring.
//  - floating:     long-double sums with the closed-boundary window.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "radsum/dist.hpp"
#include "radsum/rational.hpp"
#include "radsum/weights.hpp"

namespace radsum::dist::detail {

enum class Mode { rational, sqrt_single, floating };

struct Model {
  Mode mode = Mode::floating;
  int n = 0;

  // rational: v_i = scaled[i] / denom
  std::vector<std::int64_t> scaled;
  std::int64_t denom = 1;
  std::int64_t sum_abs_scaled = 0;

  // sqrt_single: v_i = coeff[i] * sqrt(root)
  std::vector<std::int32_t> coeff;
  Rational root{0, 1};
  std::int64_t sum_coeff = 0;

  // floating
  std::vector<long double> fv;

  static Model build(const WeightVector& w);

  std::int64_t key_min() const {
    return mode == Mode::rational ? -sum_abs_scaled : -sum_coeff;
  }
  std::int64_t key_max() const {
    return mode == Mode::rational ? sum_abs_scaled : sum_coeff;
  }
  long double key_value(std::int64_t k) const;
};

inline std::optional<__int128> mul128(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
  return r;
}

// sign of a*b - c*d with overflow detection
inline std::optional<int> sign_prod_diff(__int128 a, __int128 b, __int128 c, __int128 d) {
  auto lhs = mul128(a, b);
  auto rhs = mul128(c, d);
  if (!lhs || !rhs) return std::nullopt;
  if (*lhs < *rhs) return -1;
  if (*lhs > *rhs) return 1;
  return 0;
}

// --- exact three-way comparisons of sum keys against bounds ---------------
// All return nullopt when the integer route would overflow; callers then use
// the long-double window route and flag the outcome.

// A/L  vs  p/q
inline std::optional<int> cmp_ratio_rational(std::int64_t A, std::int64_t L,
                                             const Rational& b) {
  return sign_prod_diff(A, b.den(), b.num(), L);
}

// A/L  vs  sign*sqrt(p/q), p/q >= 0
inline std::optional<int> cmp_ratio_sqrt(std::int64_t A, std::int64_t L, int sign,
                                         const Rational& r) {
  if (r.is_zero()) return A < 0 ? -1 : (A > 0 ? 1 : 0);
  if (sign > 0) {
    if (A <= 0) return -1;
    // A^2 q  vs  p L^2
    auto a2 = mul128(A, A);
    auto l2 = mul128(L, L);
    if (!a2 || !l2) return std::nullopt;
    return sign_prod_diff(*a2, r.den(), r.num(), *l2);
  }
  if (A >= 0) return 1;
  auto a2 = mul128(A, A);
  auto l2 = mul128(L, L);
  if (!a2 || !l2) return std::nullopt;
  auto c = sign_prod_diff(*a2, r.den(), r.num(), *l2);
  if (!c) return std::nullopt;
  return -*c;  // both negative: larger magnitude is smaller
}

// m*sqrt(r)  vs  p/q
inline std::optional<int> cmp_sqrt_rational(std::int64_t m, const Rational& r,
                                            const Rational& b) {
  if (m == 0 || r.is_zero()) return b.num() > 0 ? -1 : (b.num() < 0 ? 1 : 0);
  if (b.num() == 0) return m > 0 ? 1 : -1;
  if ((m > 0) != (b.num() > 0)) return m > 0 ? 1 : -1;
  // same sign: compare m^2 p q'^2 vs p'^2 q
  auto m2 = mul128(m, m);
  if (!m2) return std::nullopt;
  auto m2p = mul128(*m2, r.num());
  auto q2 = mul128(b.den(), b.den());
  auto p2 = mul128(b.num(), b.num());
  if (!m2p || !q2 || !p2) return std::nullopt;
  auto c = sign_prod_diff(*m2p, *q2, *p2, r.den());
  if (!c) return std::nullopt;
  return m > 0 ? *c : -*c;
}

// m*sqrt(r)  vs  sign*sqrt(p/q)
inline std::optional<int> cmp_sqrt_sqrt(std::int64_t m, const Rational& r, int sign,
                                        const Rational& b) {
  bool lhs_zero = (m == 0 || r.is_zero());
  bool rhs_zero = b.is_zero();
  if (lhs_zero && rhs_zero) return 0;
  if (lhs_zero) return sign > 0 ? -1 : 1;
  if (rhs_zero) return m > 0 ? 1 : -1;
  if ((m > 0) != (sign > 0)) return m > 0 ? 1 : -1;
  // same sign: compare m^2 p q' vs p' q
  auto m2 = mul128(m, m);
  if (!m2) return std::nullopt;
  auto m2p = mul128(*m2, r.num());
  if (!m2p) return std::nullopt;
  auto c = sign_prod_diff(*m2p, b.den(), b.num(), r.den());
  if (!c) return std::nullopt;
  return m > 0 ? *c : -*c;
}

// key vs bound for the exact modes; nullopt on overflow or floating bound
inline std::optional<int> cmp_key_bound(const Model& mdl, std::int64_t key, const Bound& b) {
  switch (b.kind()) {
    case Bound::Kind::minus_infinity:
      return 1;
    case Bound::Kind::plus_infinity:
      return -1;
    case Bound::Kind::rational:
      return mdl.mode == Mode::rational ? cmp_ratio_rational(key, mdl.denom, b.rat())
                                        : cmp_sqrt_rational(key, mdl.root, b.rat());
    case Bound::Kind::sqrt_rational:
      return mdl.mode == Mode::rational
                 ? cmp_ratio_sqrt(key, mdl.denom, b.sqrt_sign(), b.rat())
                 : cmp_sqrt_sqrt(key, mdl.root, b.sqrt_sign(), b.rat());
    case Bound::Kind::floating:
      return std::nullopt;
  }
  return std::nullopt;
}

// --- interval query plans ---------------------------------------------------

// Exact-mode plan in integer key space: inside = [k_lo, k_hi]; when one side
// had to be resolved approximately, keys inside its window range count as
// boundary-resolved and the whole query is marked non-exact.
struct ExactPlan {
  std::int64_t k_lo = 0, k_hi = -1;
  bool exact = true;
  bool has_window_lo = false, has_window_hi = false;
  std::int64_t wlo_a = 0, wlo_b = -1;  // window around lo, inclusive key range
  std::int64_t whi_a = 0, whi_b = -1;
};

struct FloatPlan {
  long double lo = 0, hi = 0;  // may be +-infinity
  long double eps = 1e-9L;
};

ExactPlan make_exact_plan(const Model& mdl, const Bound& lo, const Bound& hi,
                          const DistConfig& cfg);
FloatPlan make_float_plan(const Bound& lo, const Bound& hi, const DistConfig& cfg);

struct CountOutcome {
  std::uint64_t inside = 0;
  std::uint64_t boundary = 0;
  bool exact = true;
};

// full 2^n enumeration count
CountOutcome count_naive(const Model& mdl, const Bound& lo, const Bound& hi,
                         const DistConfig& cfg);
// meet-in-the-middle count
CountOutcome count_mim(const Model& mdl, const Bound& lo, const Bound& hi,
                       const DistConfig& cfg);

// materialized sign-sum keys for a contiguous index range [from, to)
std::vector<std::int64_t> enumerate_keys_exact(const Model& mdl, int from, int to);
std::vector<double> enumerate_keys_float(const Model& mdl, int from, int to);

// run fn(chunk) for chunk in [0, chunks) on up to `threads` workers
void for_each_chunk(int chunks, int threads, const std::function<void(int)>& fn);

}  // namespace radsum::dist::detail
