#include "radsum/dist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "engine_detail.hpp"

namespace radsum::dist {

// ---------------------------------------------------------------------------
// Bound

Bound Bound::minus_infinity() {
  return Bound(Kind::minus_infinity, Rational(), 1, -std::numeric_limits<double>::infinity());
}
Bound Bound::plus_infinity() {
  return Bound(Kind::plus_infinity, Rational(), 1, std::numeric_limits<double>::infinity());
}
Bound Bound::exact(const Rational& r) { return Bound(Kind::rational, r, 1, r.value()); }
Bound Bound::exact_sqrt(int sign, const Rational& r) {
  if (r.is_negative()) throw std::domain_error("Bound::exact_sqrt: negative radicand");
  if (sign != 1 && sign != -1) throw std::domain_error("Bound::exact_sqrt: sign must be +-1");
  return Bound(Kind::sqrt_rational, r, sign, sign * std::sqrt(r.value()));
}
Bound Bound::from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("Bound::from_double: non-finite");
  if (auto r = Rational::from_double_exact(x)) return exact(*r);
  return approx(x);
}
Bound Bound::approx(double x) {
  if (!std::isfinite(x)) throw std::domain_error("Bound::approx: non-finite");
  return Bound(Kind::floating, Rational(), 1, x);
}

namespace detail {

// ---------------------------------------------------------------------------
// Model

Model Model::build(const WeightVector& w) {
  Model m;
  m.n = static_cast<int>(w.size());

  // rational: common denominator, int64 scaled weights
  if (w.exact_mode()) {
    std::int64_t L = 1;
    bool ok = true;
    for (const auto& e : w.entries()) {
      auto l = checked_lcm(L, e.exact->den());
      if (!l || *l > (std::int64_t{1} << 61)) {
        ok = false;
        break;
      }
      L = *l;
    }
    if (ok) {
      std::vector<std::int64_t> scaled;
      std::int64_t sum_abs = 0;
      scaled.reserve(w.size());
      for (const auto& e : w.entries()) {
        auto a = checked_mul(e.exact->num(), L / e.exact->den());
        if (!a) {
          ok = false;
          break;
        }
        scaled.push_back(*a);
        auto s = checked_add(sum_abs, *a < 0 ? -*a : *a);
        if (!s || *s > (std::int64_t{1} << 61)) {
          ok = false;
          break;
        }
        sum_abs = *s;
      }
      if (ok) {
        m.mode = Mode::rational;
        m.scaled = std::move(scaled);
        m.denom = L;
        m.sum_abs_scaled = sum_abs;
        return m;
      }
    }
  }

  // sqrt_single: all squares exact and at most one distinct nonzero square
  if (w.squared_exact_mode()) {
    Rational r(0, 1);
    bool ok = true;
    for (const auto& e : w.entries()) {
      if (e.exact_sq->is_zero()) continue;
      if (r.is_zero())
        r = *e.exact_sq;
      else if (r != *e.exact_sq) {
        ok = false;
        break;
      }
    }
    if (ok) {
      m.mode = Mode::sqrt_single;
      m.root = r;
      m.coeff.reserve(w.size());
      for (const auto& e : w.entries())
        m.coeff.push_back(e.exact_sq->is_zero() ? 0 : 1);
      m.sum_coeff = static_cast<std::int64_t>(
          std::count(m.coeff.begin(), m.coeff.end(), 1));
      return m;
    }
  }

  m.mode = Mode::floating;
  m.fv.reserve(w.size());
  for (const auto& e : w.entries()) m.fv.push_back(static_cast<long double>(e.value));
  return m;
}

long double Model::key_value(std::int64_t k) const {
  if (mode == Mode::rational)
    return static_cast<long double>(k) / static_cast<long double>(denom);
  return static_cast<long double>(k) *
         std::sqrt(static_cast<long double>(root.num()) / static_cast<long double>(root.den()));
}

// ---------------------------------------------------------------------------
// plans

namespace {

long double bound_ld(const Bound& b) {
  switch (b.kind()) {
    case Bound::Kind::minus_infinity:
      return -std::numeric_limits<long double>::infinity();
    case Bound::Kind::plus_infinity:
      return std::numeric_limits<long double>::infinity();
    case Bound::Kind::rational:
      return static_cast<long double>(b.rat().num()) / static_cast<long double>(b.rat().den());
    case Bound::Kind::sqrt_rational:
      return b.sqrt_sign() * std::sqrt(static_cast<long double>(b.rat().num()) /
                                       static_cast<long double>(b.rat().den()));
    case Bound::Kind::floating:
      return static_cast<long double>(b.value());
  }
  return 0;
}

// least key k in [kmin, kmax+1] with value(k) >= / > bound, by exact compare;
// nullopt when a comparison overflowed
std::optional<std::int64_t> least_key_exact(const Model& mdl, const Bound& b, bool strict) {
  std::int64_t lo = mdl.key_min(), hi = mdl.key_max() + 1;
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    auto c = cmp_key_bound(mdl, mid, b);
    if (!c) return std::nullopt;
    bool sat = strict ? *c > 0 : *c >= 0;
    if (sat)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// float route of the same search, against a long double threshold
std::int64_t least_key_float(const Model& mdl, long double threshold, bool strict) {
  std::int64_t lo = mdl.key_min(), hi = mdl.key_max() + 1;
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    long double v = mdl.key_value(mid);
    bool sat = strict ? v > threshold : v >= threshold;
    if (sat)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

ExactPlan make_exact_plan(const Model& mdl, const Bound& lo, const Bound& hi,
                          const DistConfig& cfg) {
  ExactPlan plan;
  const long double eps = cfg.boundary_eps;

  if (lo.kind() == Bound::Kind::minus_infinity) {
    plan.k_lo = mdl.key_min();
  } else if (auto k = least_key_exact(mdl, lo, /*strict=*/false)) {
    plan.k_lo = *k;
  } else {
    long double b = bound_ld(lo);
    plan.k_lo = least_key_float(mdl, b - eps, false);
    plan.has_window_lo = true;
    plan.wlo_a = plan.k_lo;
    plan.wlo_b = least_key_float(mdl, b + eps, true) - 1;
    plan.exact = false;
  }

  if (hi.kind() == Bound::Kind::plus_infinity) {
    plan.k_hi = mdl.key_max();
  } else if (auto k = least_key_exact(mdl, hi, /*strict=*/true)) {
    plan.k_hi = *k - 1;
  } else {
    long double b = bound_ld(hi);
    plan.k_hi = least_key_float(mdl, b + eps, true) - 1;
    plan.has_window_hi = true;
    plan.whi_a = least_key_float(mdl, b - eps, false);
    plan.whi_b = plan.k_hi;
    plan.exact = false;
  }
  return plan;
}

FloatPlan make_float_plan(const Bound& lo, const Bound& hi, const DistConfig& cfg) {
  FloatPlan plan;
  plan.lo = bound_ld(lo);
  plan.hi = bound_ld(hi);
  plan.eps = cfg.boundary_eps;
  return plan;
}

// ---------------------------------------------------------------------------
// enumeration

void for_each_chunk(int chunks, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || chunks <= 1) {
    for (int c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= chunks) return;
      fn(c);
    }
  };
  int nw = std::min(threads, chunks);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

namespace {

int prefix_bits_for(int n, int threads) {
  if (threads <= 1) return 0;
  int p = 0;
  while ((1 << p) < threads * 4 && p < n && p < 12) ++p;
  return p;
}

// depth-first over signs of indices [from, n); partial accumulated
// left-to-right so every engine sees the same association order
template <class Key, class AddFn, class LeafFn>
void dfs(int from, int to, Key partial, const AddFn& add, const LeafFn& leaf) {
  if (from == to) {
    leaf(partial);
    return;
  }
  dfs(from + 1, to, add(partial, from, +1), add, leaf);
  dfs(from + 1, to, add(partial, from, -1), add, leaf);
}

struct ExactCounter {
  const ExactPlan& plan;
  std::uint64_t inside = 0, boundary = 0;
  void operator()(std::int64_t k) {
    if (k >= plan.k_lo && k <= plan.k_hi) ++inside;
    if ((plan.has_window_lo && k >= plan.wlo_a && k <= plan.wlo_b) ||
        (plan.has_window_hi && k >= plan.whi_a && k <= plan.whi_b))
      ++boundary;
  }
};

struct FloatCounter {
  const FloatPlan& plan;
  std::uint64_t inside = 0, boundary = 0;
  void operator()(long double s) {
    if (s >= plan.lo - plan.eps && s <= plan.hi + plan.eps) ++inside;
    bool near_lo = std::isfinite(plan.lo) && std::fabs(s - plan.lo) <= plan.eps;
    bool near_hi = std::isfinite(plan.hi) && std::fabs(s - plan.hi) <= plan.eps;
    if (near_lo || near_hi) ++boundary;
  }
};

std::int64_t exact_weight(const Model& mdl, int i) {
  return mdl.mode == Mode::rational ? mdl.scaled[static_cast<std::size_t>(i)]
                                    : mdl.coeff[static_cast<std::size_t>(i)];
}

}  // namespace

CountOutcome count_naive(const Model& mdl, const Bound& lo, const Bound& hi,
                         const DistConfig& cfg) {
  const int n = mdl.n;
  const int p = prefix_bits_for(n, cfg.threads);
  const int chunks = 1 << p;
  CountOutcome total;

  if (mdl.mode == Mode::floating) {
    FloatPlan plan = make_float_plan(lo, hi, cfg);
    std::vector<FloatCounter> slots(static_cast<std::size_t>(chunks), FloatCounter{plan});
    auto add = [&](long double s, int i, int sign) {
      return s + sign * mdl.fv[static_cast<std::size_t>(i)];
    };
    for_each_chunk(chunks, cfg.threads, [&](int c) {
      long double partial = 0.0L;
      for (int j = 0; j < p; ++j)
        partial = add(partial, j, (c >> j) & 1 ? -1 : +1);
      dfs<long double>(p, n, partial, add, std::ref(slots[static_cast<std::size_t>(c)]));
    });
    for (auto& s : slots) {
      total.inside += s.inside;
      total.boundary += s.boundary;
    }
    total.exact = false;
    return total;
  }

  ExactPlan plan = make_exact_plan(mdl, lo, hi, cfg);
  std::vector<ExactCounter> slots(static_cast<std::size_t>(chunks), ExactCounter{plan});
  auto add = [&](std::int64_t s, int i, int sign) { return s + sign * exact_weight(mdl, i); };
  for_each_chunk(chunks, cfg.threads, [&](int c) {
    std::int64_t partial = 0;
    for (int j = 0; j < p; ++j)
      partial = add(partial, j, (c >> j) & 1 ? -1 : +1);
    dfs<std::int64_t>(p, n, partial, add, std::ref(slots[static_cast<std::size_t>(c)]));
  });
  for (auto& s : slots) {
    total.inside += s.inside;
    total.boundary += s.boundary;
  }
  total.exact = plan.exact;
  return total;
}

std::vector<std::int64_t> enumerate_keys_exact(const Model& mdl, int from, int to) {
  std::vector<std::int64_t> keys;
  keys.reserve(std::size_t{1} << (to - from));
  auto add = [&](std::int64_t s, int i, int sign) { return s + sign * exact_weight(mdl, i); };
  dfs<std::int64_t>(from, to, 0, add, [&](std::int64_t k) { keys.push_back(k); });
  return keys;
}

std::vector<double> enumerate_keys_float(const Model& mdl, int from, int to) {
  std::vector<double> keys;
  keys.reserve(std::size_t{1} << (to - from));
  auto add = [&](long double s, int i, int sign) {
    return s + sign * mdl.fv[static_cast<std::size_t>(i)];
  };
  dfs<long double>(from, to, 0.0L, add,
                   [&](long double k) { keys.push_back(static_cast<double>(k)); });
  return keys;
}

namespace {

std::uint64_t count_range_int(const std::vector<std::int64_t>& sorted, std::int64_t a,
                              std::int64_t b) {
  if (a > b) return 0;
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), a);
  auto hi = std::upper_bound(sorted.begin(), sorted.end(), b);
  return static_cast<std::uint64_t>(hi - lo);
}

std::uint64_t count_range_ld(const std::vector<double>& sorted, long double a, long double b) {
  if (a > b) return 0;
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), a,
                             [](double x, long double v) { return x < v; });
  auto hi = std::upper_bound(sorted.begin(), sorted.end(), b,
                             [](long double v, double x) { return v < x; });
  return static_cast<std::uint64_t>(hi - lo);
}

}  // namespace

CountOutcome count_mim(const Model& mdl, const Bound& lo, const Bound& hi,
                       const DistConfig& cfg) {
  const int n = mdl.n;
  const int h = (n + 1) / 2;  // left gets the larger half
  CountOutcome total;

  if (mdl.mode == Mode::floating) {
    FloatPlan plan = make_float_plan(lo, hi, cfg);
    std::vector<double> left = enumerate_keys_float(mdl, 0, h);
    std::vector<double> right = enumerate_keys_float(mdl, h, n);
    std::sort(right.begin(), right.end());
    for (double lv : left) {
      long double l = lv;
      total.inside += count_range_ld(right, plan.lo - plan.eps - l, plan.hi + plan.eps - l);
      if (std::isfinite(plan.lo))
        total.boundary += count_range_ld(right, plan.lo - plan.eps - l, plan.lo + plan.eps - l);
      if (std::isfinite(plan.hi))
        total.boundary += count_range_ld(right, plan.hi - plan.eps - l, plan.hi + plan.eps - l);
    }
    total.exact = false;
    return total;
  }

  ExactPlan plan = make_exact_plan(mdl, lo, hi, cfg);
  std::vector<std::int64_t> left = enumerate_keys_exact(mdl, 0, h);
  std::vector<std::int64_t> right = enumerate_keys_exact(mdl, h, n);
  std::sort(right.begin(), right.end());
  for (std::int64_t l : left) {
    total.inside += count_range_int(right, plan.k_lo - l, plan.k_hi - l);
    if (plan.has_window_lo)
      total.boundary += count_range_int(right, plan.wlo_a - l, plan.wlo_b - l);
    if (plan.has_window_hi)
      total.boundary += count_range_int(right, plan.whi_a - l, plan.whi_b - l);
  }
  total.exact = plan.exact;
  return total;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public surface

namespace {

using detail::Mode;
using detail::Model;

void require_capacity(int n, Engine engine, const DistConfig& cfg) {
  if (n > 62) throw capacity_error("n > 62: counts no longer fit in 64-bit integers");
  if (engine == Engine::naive && n > cfg.naive_cap)
    throw capacity_error("naive engine capped at n = " + std::to_string(cfg.naive_cap));
  if (engine == Engine::mim && n > cfg.mim_cap)
    throw capacity_error("meet-in-the-middle engine capped at n = " + std::to_string(cfg.mim_cap));
}

Engine resolve_engine(int n, Engine engine, const DistConfig& cfg) {
  if (engine == Engine::automatic) engine = n <= 20 ? Engine::naive : Engine::mim;
  require_capacity(n, engine, cfg);
  return engine;
}

ExactProbability assemble(const detail::CountOutcome& c, int n) {
  ExactProbability p;
  p.numerator = c.inside;
  p.denominator = std::uint64_t{1} << n;
  p.float_value = static_cast<double>(p.numerator) / static_cast<double>(p.denominator);
  p.boundary_resolved = c.boundary;
  p.exact = c.exact;
  return p;
}

}  // namespace

ExactProbability prob_in_interval(const WeightVector& w, const Bound& lo, const Bound& hi,
                                  Engine engine, const DistConfig& cfg) {
  if (lo.value() > hi.value()) throw std::domain_error("prob_in_interval: inverted interval");
  const int n = static_cast<int>(w.size());
  engine = resolve_engine(n, engine, cfg);
  Model mdl = Model::build(w);
  auto outcome = engine == Engine::naive ? detail::count_naive(mdl, lo, hi, cfg)
                                         : detail::count_mim(mdl, lo, hi, cfg);
  return assemble(outcome, n);
}

ExactProbability prob_in_interval(const WeightVector& w, double lo, double hi, Engine engine,
                                  const DistConfig& cfg) {
  return prob_in_interval(w, Bound::from_double(lo), Bound::from_double(hi), engine, cfg);
}

ExactProbability tail_prob(const WeightVector& w, const Bound& t, Engine engine,
                           const DistConfig& cfg) {
  return prob_in_interval(w, t, Bound::plus_infinity(), engine, cfg);
}

ExactProbability tail_prob(const WeightVector& w, double t, Engine engine,
                           const DistConfig& cfg) {
  return tail_prob(w, Bound::from_double(t), engine, cfg);
}

ExactProbability shifted_prob(double x, const WeightVector& w, Engine engine,
                              const DistConfig& cfg) {
  if (!std::isfinite(x) || std::fabs(x) > 1.0)
    throw std::domain_error("shifted_prob: requires |x| <= 1");
  double a = 1.0 + x, b = 1.0 - x;
  return prob_in_interval(w, Bound::from_double(-a), Bound::from_double(b), engine, cfg);
}

ExactProbability shifted_prob(const Rational& x, const WeightVector& w, Engine engine,
                              const DistConfig& cfg) {
  if (x.abs() > Rational(1, 1)) throw std::domain_error("shifted_prob: requires |x| <= 1");
  Rational one(1, 1);
  return prob_in_interval(w, Bound::exact((one + x).negated()), Bound::exact(one - x), engine,
                          cfg);
}

// ---------------------------------------------------------------------------
// full distribution

SignedSumDistribution enumerate_naive(const WeightVector& w, const DistConfig& cfg) {
  const int n = static_cast<int>(w.size());
  require_capacity(n, Engine::naive, cfg);
  Model mdl = Model::build(w);
  SignedSumDistribution out;
  out.n = n;

  if (mdl.mode == Mode::floating) {
    std::vector<double> keys = detail::enumerate_keys_float(mdl, 0, n);
    std::sort(keys.begin(), keys.end());
    // cluster: a gap wider than merge_eps starts a new atom; the midpoint
    // representative keeps the distribution exactly symmetric about 0
    std::size_t i = 0;
    while (i < keys.size()) {
      std::size_t j = i + 1;
      while (j < keys.size() && keys[j] - keys[j - 1] <= cfg.merge_eps) ++j;
      double rep = 0.5 * (keys[i] + keys[j - 1]);
      out.atoms.push_back(DistAtom{rep, static_cast<std::uint64_t>(j - i)});
      i = j;
    }
    return out;
  }

  std::vector<std::int64_t> keys = detail::enumerate_keys_exact(mdl, 0, n);
  std::sort(keys.begin(), keys.end());
  const double scale = mdl.mode == Mode::rational
                           ? 1.0 / static_cast<double>(mdl.denom)
                           : std::sqrt(mdl.root.value());
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    double v = mdl.mode == Mode::rational
                   ? static_cast<double>(keys[i]) / static_cast<double>(mdl.denom)
                   : static_cast<double>(keys[i]) * scale;
    // distinct keys can collide in double space for huge denominators
    if (!out.atoms.empty() && out.atoms.back().value == v)
      out.atoms.back().count += static_cast<std::uint64_t>(j - i);
    else
      out.atoms.push_back(DistAtom{v, static_cast<std::uint64_t>(j - i)});
    i = j;
  }
  return out;
}

void SignedSumDistribution::write_csv(std::ostream& out) const {
  out << "value,count,prob\n";
  const double denom = static_cast<double>(total());
  char buf[64];
  for (const auto& a : atoms) {
    std::snprintf(buf, sizeof buf, "%.17g", a.value);
    out << buf << ',' << a.count << ',';
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(a.count) / denom);
    out << buf << '\n';
  }
}

}  // namespace radsum::dist
