#include "radsum/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "engine_detail.hpp"
#include "radsum/bounds.hpp"
#include "radsum/errors.hpp"

namespace radsum::stopping {

using dist::DistConfig;
using dist::ExactProbability;
using dist::detail::Mode;
using dist::detail::Model;

// ---------------------------------------------------------------------------
// canonical ordering

CanonicalOrdering canonical_reorder(const WeightVector& w) {
  struct Item {
    WeightEntry e;
    int orig;
    int flip;
  };
  std::vector<Item> items;
  items.reserve(std::max<std::size_t>(w.size(), 4));
  for (std::size_t i = 0; i < w.size(); ++i) {
    WeightEntry e = w.entry(i);
    int flip = e.value < 0 ? -1 : 1;
    e.value = std::fabs(e.value);
    if (e.exact) e.exact = e.exact->abs();
    items.push_back(Item{e, static_cast<int>(i), flip});
  }
  int pad = 0;
  while (items.size() < 4) {
    WeightEntry z;
    z.value = 0.0;
    z.exact = Rational();
    z.exact_sq = Rational();
    items.push_back(Item{z, -1, 1});
    ++pad;
  }

  // descending magnitude; stable, so ties keep the input order
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.e.value > b.e.value; });

  const int n = static_cast<int>(items.size());
  std::vector<WeightEntry> slots(static_cast<std::size_t>(n));
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  std::vector<int> flip(static_cast<std::size_t>(n), 1);
  auto place = [&](int pos, const Item& it) {
    slots[static_cast<std::size_t>(pos)] = it.e;
    perm[static_cast<std::size_t>(pos)] = it.orig;
    flip[static_cast<std::size_t>(pos)] = it.flip;
  };
  // v_n, v_1, v_{n-1}, v_2 get the four largest; the rest fill v_3..v_{n-2}
  place(n - 1, items[0]);
  place(0, items[1]);
  place(n - 2, items[2]);
  place(1, items[3]);
  for (int j = 4; j < n; ++j) place(j - 2, items[static_cast<std::size_t>(j)]);

  return CanonicalOrdering{WeightVector::from_entries(std::move(slots)), std::move(perm),
                           std::move(flip), pad};
}

// ---------------------------------------------------------------------------
// mode policies: exact integer keys vs long-double sums

namespace {

struct ExactPolicy {
  const Model& m;
  using Key = std::int64_t;
  Key zero() const { return 0; }
  Key add(Key x, int idx, int sign) const {
    std::int64_t wgt = m.mode == Mode::rational
                           ? m.scaled[static_cast<std::size_t>(idx)]
                           : static_cast<std::int64_t>(m.coeff[static_cast<std::size_t>(idx)]);
    return x + sign * wgt;
  }
  // |X_t| > 1 - v_{t+1}, where widx is the 0-based index of v_{t+1}
  bool exceeds(Key x, int widx) const {
    std::int64_t ax = x < 0 ? -x : x;
    if (m.mode == Mode::rational)
      return ax > m.denom - m.scaled[static_cast<std::size_t>(widx)];
    __int128 s = ax + m.coeff[static_cast<std::size_t>(widx)];
    return s * s * m.root.num() > static_cast<__int128>(m.root.den());
  }
  double to_double(Key x) const { return static_cast<double>(m.key_value(x)); }
};

struct FloatPolicy {
  const Model& m;
  using Key = long double;
  Key zero() const { return 0.0L; }
  Key add(Key x, int idx, int sign) const { return x + sign * m.fv[static_cast<std::size_t>(idx)]; }
  bool exceeds(Key x, int widx) const {
    return std::fabs(x) > 1.0L - m.fv[static_cast<std::size_t>(widx)];
  }
  double to_double(Key x) const { return static_cast<double>(x); }
};

// all-plus prefix walk: the deterministic K
template <class P>
int compute_K_with(const P& p, int n) {
  typename P::Key x = p.zero();
  for (int idx = 0; idx + 1 < n; ++idx) {
    x = p.add(x, idx, +1);
    int t = idx + 1;
    if (t == n - 1 || p.exceeds(x, t)) return t;
  }
  return n - 1;
}

// single-path stopping time
template <class P>
StopResult compute_T_with(const P& p, int n, const std::vector<int>& signs) {
  typename P::Key x = p.zero();
  for (int idx = 0; idx + 1 < n; ++idx) {
    x = p.add(x, idx, signs[static_cast<std::size_t>(idx)]);
    int t = idx + 1;
    if (t == n - 1 || p.exceeds(x, t)) return StopResult{t, p.to_double(x)};
  }
  return StopResult{n - 1, p.to_double(x)};  // unreachable for n >= 2
}

// depth-first over sign prefixes; fn(T, X_T_key, all_equal_prefix, mult)
template <class P, class NodeFn>
void walk_prefixes(const P& p, int n, const NodeFn& fn) {
  auto rec = [&](auto&& self, int idx, typename P::Key x, bool all_eq, int first) -> void {
    for (int sign : {+1, -1}) {
      typename P::Key nx = p.add(x, idx, sign);
      bool na = idx == 0 ? true : (all_eq && sign == first);
      int nf = idx == 0 ? sign : first;
      int t = idx + 1;
      if (t == n - 1 || p.exceeds(nx, t))
        fn(t, nx, na, std::uint64_t{1} << (n - t));
      else
        self(self, idx + 1, nx, na, nf);
    }
  };
  rec(rec, 0, p.zero(), true, 0);
}

struct TailCount {
  std::uint64_t inside = 0;
  std::uint64_t boundary = 0;
};

// everything needed to answer |X_T + Y_tail| <= 1 exactly per mode
struct TailTables {
  Mode mode;
  std::vector<std::vector<std::int64_t>> exact;  // exact[j]: sorted suffix sums over [j, n)
  std::vector<std::vector<double>> flt;
  std::int64_t denom = 1;          // rational mode
  std::int64_t sqrt_radius = -1;   // sqrt mode: max s >= 0 with s^2 p <= q; -1 = all inside
  long double eps = 1e-9L;

  static TailTables build(const Model& m, const DistConfig& cfg) {
    TailTables t;
    t.mode = m.mode;
    t.eps = cfg.boundary_eps;
    const int n = m.n;
    if (m.mode == Mode::floating) {
      t.flt.resize(static_cast<std::size_t>(n) + 1);
      t.flt[static_cast<std::size_t>(n)] = {0.0};
      for (int j = n - 1; j >= 1; --j) {
        const auto& prev = t.flt[static_cast<std::size_t>(j) + 1];
        std::vector<double> plus(prev), minus(prev);
        long double wj = m.fv[static_cast<std::size_t>(j)];
        for (auto& v : plus) v = static_cast<double>(v + wj);
        for (auto& v : minus) v = static_cast<double>(v - wj);
        std::vector<double> merged(plus.size() * 2);
        std::merge(minus.begin(), minus.end(), plus.begin(), plus.end(), merged.begin());
        t.flt[static_cast<std::size_t>(j)] = std::move(merged);
      }
      return t;
    }
    t.denom = m.denom;
    if (m.mode == Mode::sqrt_single && m.root.num() > 0) {
      std::int64_t s = 0;
      while (static_cast<__int128>(s + 1) * (s + 1) * m.root.num() <=
             static_cast<__int128>(m.root.den()))
        ++s;
      t.sqrt_radius = s;
    }
    t.exact.resize(static_cast<std::size_t>(n) + 1);
    t.exact[static_cast<std::size_t>(n)] = {0};
    for (int j = n - 1; j >= 1; --j) {
      const auto& prev = t.exact[static_cast<std::size_t>(j) + 1];
      std::int64_t wj = m.mode == Mode::rational
                            ? m.scaled[static_cast<std::size_t>(j)]
                            : static_cast<std::int64_t>(m.coeff[static_cast<std::size_t>(j)]);
      std::vector<std::int64_t> plus(prev), minus(prev);
      for (auto& v : plus) v += wj;
      for (auto& v : minus) v -= wj;
      std::vector<std::int64_t> merged(plus.size() * 2);
      std::merge(minus.begin(), minus.end(), plus.begin(), plus.end(), merged.begin());
      t.exact[static_cast<std::size_t>(j)] = std::move(merged);
    }
    return t;
  }

  // count tail outcomes with |x + Y| <= 1, x given as the mode-native key
  TailCount count_inside(int T, std::int64_t xkey) const {
    TailCount out;
    const auto& s = exact[static_cast<std::size_t>(T)];
    if (mode == Mode::rational) {
      auto lo = std::lower_bound(s.begin(), s.end(), -denom - xkey);
      auto hi = std::upper_bound(s.begin(), s.end(), denom - xkey);
      out.inside = static_cast<std::uint64_t>(hi - lo);
      return out;
    }
    if (sqrt_radius < 0) {  // zero radicand: every total is 0
      out.inside = s.size();
      return out;
    }
    auto lo = std::lower_bound(s.begin(), s.end(), -xkey - sqrt_radius);
    auto hi = std::upper_bound(s.begin(), s.end(), -xkey + sqrt_radius);
    out.inside = static_cast<std::uint64_t>(hi - lo);
    return out;
  }

  TailCount count_inside_float(int T, long double x) const {
    TailCount out;
    const auto& s = flt[static_cast<std::size_t>(T)];
    auto cnt = [&](long double a, long double b) -> std::uint64_t {
      if (a > b) return 0;
      auto lo = std::lower_bound(s.begin(), s.end(), a,
                                 [](double v, long double t2) { return v < t2; });
      auto hi = std::upper_bound(s.begin(), s.end(), b,
                                 [](long double t2, double v) { return t2 < v; });
      return static_cast<std::uint64_t>(hi - lo);
    };
    long double lo = -1.0L - x, hi = 1.0L - x;
    out.inside = cnt(lo - eps, hi + eps);
    out.boundary = cnt(lo - eps, lo + eps) + cnt(hi - eps, hi + eps);
    return out;
  }
};

// one exhaustive pass: per-T tallies plus the structure and variance checks
struct Analysis {
  int n = 0;
  int K = 0;
  bool exact = false;

  struct Tally {
    std::uint64_t total = 0;    // paths with T = i
    std::uint64_t inside = 0;   // of those, |S| <= 1
    std::uint64_t boundary = 0;
  };
  std::map<int, Tally> per_T;

  std::uint64_t t_eq_K = 0;
  std::uint64_t t_eq_K_plus_1 = 0;
  bool every_TK_node_all_equal = true;

  // variance-bound bookkeeping over nodes with T <= n-3 (x = |X_T|)
  double worst_case_slack = std::numeric_limits<double>::infinity();
  int worst_T = -1;
  double worst_x = 0.0;
  double worst_prefix_slack = std::numeric_limits<double>::infinity();
  double max_mix_identity_err = 0.0;
  bool mix_between_ok = true;
  bool b_order_ok = true;
  std::uint64_t case3_nodes = 0;
  std::uint64_t case4_nodes = 0;
};

Analysis analyze(const CanonicalOrdering& c, const DistConfig& cfg) {
  const int n = c.n();
  if (n > cfg.path_cap)
    throw capacity_error("path enumeration capped at n = " + std::to_string(cfg.path_cap));

  Model mdl = Model::build(c.ordered);
  TailTables tails = TailTables::build(mdl, cfg);

  Analysis a;
  a.n = n;
  a.exact = mdl.mode != Mode::floating;

  // prefix/suffix squared norms for the variance checks
  std::vector<long double> tail_sq(static_cast<std::size_t>(n) + 1, 0.0L);
  for (int j = n - 1; j >= 0; --j) {
    long double v = c.ordered.value(static_cast<std::size_t>(j));
    tail_sq[static_cast<std::size_t>(j)] = tail_sq[static_cast<std::size_t>(j) + 1] + v * v;
  }

  const double slack_tol = 1e-12;

  auto handle_node = [&](int T, double x_abs, std::uint64_t mult, const TailCount& tc,
                         bool all_eq) {
    auto& t = a.per_T[T];
    t.total += mult;
    t.inside += tc.inside;
    t.boundary += tc.boundary;
    if (T == a.K) {
      a.t_eq_K += mult;
      if (!all_eq) a.every_TK_node_all_equal = false;
    }
    if (T == a.K + 1) a.t_eq_K_plus_1 += mult;

    if (T <= n - 3) {
      CaseDiagnostics d = make_case_diagnostics(a.K, T, x_abs, n);
      double tail = static_cast<double>(tail_sq[static_cast<std::size_t>(T)]);
      double slack = d.U_value * (1.0 + x_abs) * (1.0 + x_abs) - tail;
      if (slack < a.worst_case_slack) {
        a.worst_case_slack = slack;
        a.worst_T = T;
        a.worst_x = x_abs;
      }
      (d.bound_used == CaseDiagnostics::Case::case4 ? a.case4_nodes : a.case3_nodes) += 1;

      double prefix = static_cast<double>(tail_sq[0] - tail_sq[static_cast<std::size_t>(T)]);
      double prefix_slack = prefix - std::min(d.B1, d.B2);
      a.worst_prefix_slack = std::min(a.worst_prefix_slack, prefix_slack);

      if (d.lambda >= -slack_tol && d.lambda <= 1.0 + slack_tol) {
        double closed = (2.0 * T - a.K - 1.0) / ((a.K + 1.0) * (2.0 * a.K + 1.0)) +
                        ((a.K + 1.0) * (a.K + 1.0) - T) / (2.0 * a.K + 1.0) *
                            (1.0 - x_abs) * (1.0 - x_abs);
        a.max_mix_identity_err =
            std::max(a.max_mix_identity_err, std::fabs(d.B_mix - closed));
        if (d.B_mix < std::min(d.B1, d.B2) - 1e-9 || d.B_mix > std::max(d.B1, d.B2) + 1e-9)
          a.mix_between_ok = false;
      }
      double pivot = static_cast<double>(a.K) / (a.K + 1.0);
      if (std::fabs(x_abs - pivot) > 1e-9) {
        bool b1_ge = d.B1 >= d.B2;
        if (b1_ge != (x_abs >= pivot)) a.b_order_ok = false;
      }
    }
  };

  if (mdl.mode == Mode::floating) {
    FloatPolicy p{mdl};
    a.K = compute_K_with(p, n);
    walk_prefixes(p, n, [&](int T, long double x, bool all_eq, std::uint64_t mult) {
      TailCount tc = tails.count_inside_float(T, x);
      handle_node(T, static_cast<double>(std::fabs(x)), mult, tc, all_eq);
    });
  } else {
    ExactPolicy p{mdl};
    a.K = compute_K_with(p, n);
    walk_prefixes(p, n, [&](int T, std::int64_t x, bool all_eq, std::uint64_t mult) {
      TailCount tc = tails.count_inside(T, x);
      handle_node(T, std::fabs(p.to_double(x)), mult, tc, all_eq);
    });
  }
  return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// public operations

int compute_K(const CanonicalOrdering& c) {
  Model mdl = Model::build(c.ordered);
  if (mdl.mode == Mode::floating) return compute_K_with(FloatPolicy{mdl}, c.n());
  return compute_K_with(ExactPolicy{mdl}, c.n());
}

StopResult compute_T(const CanonicalOrdering& c, const std::vector<int>& signs) {
  const int n = c.n();
  if (static_cast<int>(signs.size()) != n)
    throw std::domain_error("compute_T: sign vector length mismatch");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::domain_error("compute_T: signs must be +-1");
  Model mdl = Model::build(c.ordered);
  if (mdl.mode == Mode::floating) return compute_T_with(FloatPolicy{mdl}, n, signs);
  return compute_T_with(ExactPolicy{mdl}, n, signs);
}

StoppingProfile build_stopping_profile(const CanonicalOrdering& c, const DistConfig& cfg) {
  const int n = c.n();
  if (n > cfg.path_cap || n > 25)
    throw capacity_error("stopping profile capped at n = " +
                         std::to_string(std::min(cfg.path_cap, 25)));
  StoppingProfile prof;
  prof.n = n;
  prof.K = compute_K(c);

  long double m = 0.0L;
  std::vector<long double> tail_sq(static_cast<std::size_t>(n) + 1, 0.0L);
  for (int j = n - 1; j >= 0; --j) {
    long double v = c.ordered.value(static_cast<std::size_t>(j));
    tail_sq[static_cast<std::size_t>(j)] = tail_sq[static_cast<std::size_t>(j) + 1] + v * v;
  }
  for (int j = 0; j < n; ++j) {
    m += c.ordered.value(static_cast<std::size_t>(j));
    prof.prefix_sums.push_back(static_cast<double>(m));
  }

  std::vector<int> signs(static_cast<std::size_t>(n), 1);
  prof.paths.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    for (int i = 0; i < n; ++i)
      signs[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1 : 1;
    StopResult sr = compute_T(c, signs);
    PathRecord rec;
    rec.signs = mask;
    rec.T = sr.T;
    rec.X_T = sr.X_T;
    rec.tail_norm_sq = static_cast<double>(tail_sq[static_cast<std::size_t>(sr.T)]);
    prof.paths.push_back(rec);
  }
  return prof;
}

CaseDiagnostics make_case_diagnostics(int K, int T, double x, int n) {
  CaseDiagnostics d;
  d.lambda = (2.0 * T - K - 1.0) / (2.0 * K + 1.0);
  d.B1 = 1.0 / (K + 1.0) + (T - K - 1.0) * (1.0 - x) * (1.0 - x);
  d.B2 = T * (1.0 - x) * (1.0 - x);
  d.B_mix = d.lambda * d.B1 + (1.0 - d.lambda) * d.B2;
  if (x >= 1.0) {
    d.K0_infinite = true;
    d.K0 = std::numeric_limits<double>::infinity();
  } else {
    d.K0 = x / (1.0 - x);
  }
  if (T >= n - 2) {
    d.bound_used = CaseDiagnostics::Case::case12;
    d.U_value = 0.0;
  } else if (2 * T <= 3 * K + 2) {
    d.bound_used = CaseDiagnostics::Case::case3;
    d.U_value = bounds::eval_U(K, static_cast<double>(T));
  } else {
    d.bound_used = CaseDiagnostics::Case::case4;
    d.U_value = bounds::eval_U(K, 1.5 * K + 1.0);
  }
  return d;
}

VerificationReport verify_all_equal_signs_rule(const CanonicalOrdering& c,
                                               const DistConfig& cfg) {
  const int n = c.n();
  Analysis a = analyze(c, cfg);

  VerificationReport r;
  r.claim_id = "all_equal_signs_rule";
  r.grid_spec = "exhaustive over 2^" + std::to_string(n) + " paths";
  r.details["K"] = a.K;
  r.details["n"] = n;

  if (a.K > n - 3) {
    r.applicable = false;
    r.pass = true;
    r.worst_point = "K > n-3: rule not applicable";
    return r;
  }

  const std::uint64_t expected = std::uint64_t{1} << (n - a.K + 1);
  bool prob_ok = a.t_eq_K == expected && a.every_TK_node_all_equal;
  bool gap_ok = a.K > n - 4 || a.t_eq_K_plus_1 == 0;
  r.pass = prob_ok && gap_ok;
  r.margin = 0.0;
  r.details["paths_T_eq_K"] = static_cast<double>(a.t_eq_K);
  r.details["expected_T_eq_K"] = static_cast<double>(expected);
  r.details["paths_T_eq_K_plus_1"] = static_cast<double>(a.t_eq_K_plus_1);
  r.worst_point = {{"K", a.K}, {"P(T=K)", static_cast<double>(a.t_eq_K) /
                                               static_cast<double>(std::uint64_t{1} << n)}};
  return r;
}

VerificationReport verify_variance_bounds(const CanonicalOrdering& c, const DistConfig& cfg) {
  const int n = c.n();
  if (c.ordered.norm_sq() > 1.0 + 1e-9)
    throw std::domain_error("verify_variance_bounds: requires sum v_i^2 <= 1");
  Analysis a = analyze(c, cfg);

  VerificationReport r;
  r.claim_id = "variance_bounds";
  r.grid_spec = "exhaustive over 2^" + std::to_string(n) + " paths";
  bool has_nodes = a.case3_nodes + a.case4_nodes > 0;
  const double tol = 1e-12;
  bool slack_ok = !has_nodes || a.worst_case_slack >= -tol;
  bool prefix_ok = !has_nodes || a.worst_prefix_slack >= -tol;
  bool mix_ok = a.max_mix_identity_err <= 1e-9 && a.mix_between_ok;
  r.pass = slack_ok && prefix_ok && mix_ok && a.b_order_ok;
  r.margin = has_nodes ? a.worst_case_slack : 0.0;
  r.worst_point = {{"T", a.worst_T}, {"abs_X_T", a.worst_x}};
  r.details["K"] = a.K;
  r.details["case3_nodes"] = static_cast<double>(a.case3_nodes);
  r.details["case4_nodes"] = static_cast<double>(a.case4_nodes);
  r.details["worst_prefix_slack"] = has_nodes ? a.worst_prefix_slack : 0.0;
  r.details["max_mix_identity_err"] = a.max_mix_identity_err;
  r.details["b_order_ok"] = a.b_order_ok ? 1.0 : 0.0;
  return r;
}

ExactProbability conditional_prob_given_T(const CanonicalOrdering& c, int i,
                                          const DistConfig& cfg) {
  Analysis a = analyze(c, cfg);
  auto it = a.per_T.find(i);
  if (it == a.per_T.end() || it->second.total == 0)
    throw undefined_conditional_error("P(T = " + std::to_string(i) + ") = 0");
  ExactProbability p;
  p.numerator = it->second.inside;
  p.denominator = it->second.total;
  p.float_value = static_cast<double>(p.numerator) / static_cast<double>(p.denominator);
  p.boundary_resolved = it->second.boundary;
  p.exact = a.exact;
  return p;
}

// ---------------------------------------------------------------------------
// theorem certificate

namespace {

nlohmann::json prob_json(const ExactProbability& p) {
  return {{"numerator", p.numerator},
          {"denominator", p.denominator},
          {"value", p.float_value},
          {"boundary_resolved", p.boundary_resolved},
          {"exact", p.exact}};
}

}  // namespace

nlohmann::json TheoremCertificate::to_json() const {
  nlohmann::json per;
  for (const auto& [i, t] : per_T) {
    per[std::to_string(i)] = {{"count", t.count},
                              {"cond_prob", prob_json(t.cond_prob)},
                              {"bound", t.bound},
                              {"margin", t.margin}};
  }
  return {{"n", n},
          {"K", K},
          {"branch", branch},
          {"per_T", per},
          {"final_prob", prob_json(final_prob)},
          {"final_bound", final_bound},
          {"mixture_bound", mixture_bound},
          {"mixture_value", mixture_value},
          {"t_eq_K_count", t_eq_K_count},
          {"t_eq_K_plus_1_count", t_eq_K_plus_1_count},
          {"structure_ok", structure_ok},
          {"pass", pass}};
}

TheoremCertificate theorem_certificate(const WeightVector& w, const DistConfig& cfg) {
  if (w.norm_sq() > 1.0 + 1e-9)
    throw std::domain_error("theorem_certificate: requires sum v_i^2 <= 1");
  CanonicalOrdering c = canonical_reorder(w);
  const int n = c.n();
  Analysis a = analyze(c, cfg);

  TheoremCertificate cert;
  cert.n = n;
  cert.K = a.K;
  cert.final_bound = bounds::eval_G(0.25);
  cert.t_eq_K_count = a.t_eq_K;
  cert.t_eq_K_plus_1_count = a.t_eq_K_plus_1;

  const double tol = 1e-12;
  bool margins_ok = true;
  std::uint64_t total_inside = 0;

  for (auto& [i, t] : a.per_T) {
    TheoremCertificate::PerT entry;
    entry.count = t.total;
    entry.cond_prob.numerator = t.inside;
    entry.cond_prob.denominator = t.total;
    entry.cond_prob.float_value =
        static_cast<double>(t.inside) / static_cast<double>(t.total);
    entry.cond_prob.boundary_resolved = t.boundary;
    entry.cond_prob.exact = a.exact;
    if (i >= n - 2) {
      entry.bound = 0.5;
    } else if (2 * i <= 3 * a.K + 2) {
      entry.bound = bounds::eval_G(bounds::eval_U(a.K, static_cast<double>(i)));
    } else {
      entry.bound = bounds::eval_G(bounds::eval_U(a.K, 1.5 * a.K + 1.0));
    }
    entry.margin = entry.cond_prob.float_value - entry.bound;
    if (entry.margin < -tol) margins_ok = false;
    total_inside += t.inside;
    cert.per_T[i] = entry;
  }

  cert.final_prob.numerator = total_inside;
  cert.final_prob.denominator = std::uint64_t{1} << n;
  cert.final_prob.float_value =
      static_cast<double>(total_inside) / static_cast<double>(cert.final_prob.denominator);
  cert.final_prob.exact = a.exact;
  for (const auto& [i, t] : a.per_T) cert.final_prob.boundary_resolved += t.boundary;

  bool structure = true;
  if (a.K <= n - 3) {
    structure = a.t_eq_K == (std::uint64_t{1} << (n - a.K + 1)) && a.every_TK_node_all_equal;
  }
  // the whole-space mixture floor: T=K carries weight exactly 2^{1-K} with
  // bound G(U_K(K)); every other stopping time carries a bound at least
  // G(U_K(K+2)) (K <= n-4), at least 1/2 (K = n-3 beyond T=K), or 1/2
  if (a.K <= n - 4) {
    cert.branch = "K<=n-4";
    cert.mixture_bound = bounds::eval_h(a.K);
    structure = structure && a.t_eq_K_plus_1 == 0;
  } else if (a.K == n - 3) {
    cert.branch = "K==n-3";
    cert.mixture_bound = bounds::eval_half_mix(a.K);
  } else {
    cert.branch = "K>=n-2";
    cert.mixture_bound = 0.5;
  }
  // no path may stop before K
  for (const auto& [i, t] : a.per_T)
    if (i < a.K && t.total > 0) structure = false;

  cert.mixture_value = cert.final_prob.float_value;
  cert.structure_ok = structure;

  bool mixture_ok = cert.mixture_value >= cert.mixture_bound - tol;
  bool final_ok = cert.final_prob.float_value >= cert.final_bound;
  cert.pass = margins_ok && structure && mixture_ok && final_ok;
  return cert;
}

}  // namespace radsum::stopping
