#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "oracle_constants.hpp"
#include "radsum/bounds.hpp"
#include "radsum/dist.hpp"
#include "radsum/errors.hpp"
#include "radsum/rng.hpp"
#include "radsum/weights.hpp"

using namespace radsum;
using namespace radsum::dist;

namespace {

WeightVector rationals(std::initializer_list<Rational> rs) {
  return WeightVector::from_rationals(std::vector<Rational>(rs));
}

WeightVector equal_sq(int n) {
  return WeightVector::from_squared_rationals(
      std::vector<Rational>(static_cast<std::size_t>(n), Rational(1, n)));
}

WeightVector random_floats(Rng& rng, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  long double nsq = 0.0L;
  for (auto& x : v) {
    x = rng.gaussian();
    nsq += static_cast<long double>(x) * x;
  }
  for (auto& x : v) x = static_cast<double>(x / std::sqrt(nsq));
  return WeightVector::from_doubles(v);
}

}  // namespace

TEST_CASE("tiny distributions by hand") {
  auto d1 = enumerate_naive(rationals({Rational(1, 1)}));
  REQUIRE(d1.atoms.size() == 2);
  CHECK(d1.atoms[0].value == -1.0);
  CHECK(d1.atoms[0].count == 1);
  CHECK(d1.atoms[1].value == 1.0);

  auto d2 = enumerate_naive(rationals({Rational(1, 2), Rational(1, 2)}));
  REQUIRE(d2.atoms.size() == 3);
  CHECK(d2.atoms[0].value == -1.0);
  CHECK(d2.atoms[1].value == 0.0);
  CHECK(d2.atoms[1].count == 2);
  CHECK(d2.atoms[2].value == 1.0);

  // three equal weights 1/sqrt(3): the 8 sign vectors give |S| <= 1 six times
  auto p = prob_in_interval(equal_sq(3), -1.0, 1.0, Engine::naive);
  CHECK(p.numerator == 6);
  CHECK(p.denominator == 8);
  CHECK(p.exact);
  CHECK(p.boundary_resolved == 0);
}

TEST_CASE("interval queries") {
  // (1/sqrt2, 1/sqrt2): the sums +-sqrt2 fall outside [-1,1], the two zeros inside
  auto p = prob_in_interval(equal_sq(2), -1.0, 1.0, Engine::naive);
  CHECK(p.numerator == 2);
  CHECK(p.denominator == 4);

  // 20 equal weights 1/sqrt(20) against the frozen binomial count
  for (Engine e : {Engine::naive, Engine::mim}) {
    auto q = prob_in_interval(equal_sq(20), -1.0, 1.0, e);
    CHECK(q.numerator == oracle::kEqual20Numerator);
    CHECK(q.denominator == oracle::kEqual20Denominator);
    CHECK(q.exact);
  }

  // full support
  auto w = rationals({Rational(1, 4), Rational(1, 3), Rational(1, 5)});
  auto full = prob_in_interval(w, -w.sum_abs(), w.sum_abs(), Engine::naive);
  CHECK(full.numerator == full.denominator);

  CHECK_THROWS_AS(prob_in_interval(w, 1.0, -1.0, Engine::naive), std::domain_error);
}

TEST_CASE("tails") {
  auto two = equal_sq(2);
  auto p = tail_prob(two, Bound::exact_sqrt(1, Rational(2, 1)), Engine::naive);
  CHECK(p.numerator == 1);
  CHECK(p.denominator == 4);
  CHECK(p.exact);
  CHECK(p.boundary_resolved == 0);
  // the float route resolves the same tail inside the boundary window
  auto wf = WeightVector::from_doubles({1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  auto pf = tail_prob(wf, std::sqrt(2.0), Engine::naive);
  CHECK(pf.numerator == 1);
  CHECK(pf.boundary_resolved >= 1);
  // sharpness against the majorant
  CHECK(std::fabs(p.float_value - bounds::bd_tail_bound(std::sqrt(2.0))) <= 1e-10);

  // symmetry: P(S >= 0) >= 1/2, equality iff no mass at 0
  auto p0 = tail_prob(two, 0.0, Engine::naive);
  CHECK(2 * p0.numerator >= p0.denominator);
  auto podd = tail_prob(rationals({Rational(1, 3)}), 0.0, Engine::naive);
  CHECK(2 * podd.numerator == podd.denominator);  // atoms +-1/3 only
}

TEST_CASE("shifted probability") {
  auto w = rationals({Rational(1, 10)});
  auto p = shifted_prob(Rational(1, 1), w);
  CHECK(p.numerator == 1);
  CHECK(p.denominator == 2);

  auto w4 = rationals({Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8)});
  auto a = shifted_prob(0.0, w4);
  auto b = prob_in_interval(w4, -1.0, 1.0);
  CHECK(a.numerator == b.numerator);

  CHECK_THROWS_AS(shifted_prob(1.5, w4), std::domain_error);
  CHECK_THROWS_AS(shifted_prob(Rational(3, 2), w4), std::domain_error);
}

TEST_CASE("shift identity: P(|x+Y|<=1) = (P(|Y|<=1+x) + P(|Y|<=1-x))/2 exactly") {
  Rng rng(20240811);
  for (int trial = 0; trial < 100; ++trial) {
    int n = static_cast<int>(rng.uniform_int(2, 12));
    WeightVector w = random_floats(rng, n);
    double x = rng.uniform(-1.0, 1.0);
    double a = 1.0 + x, b = 1.0 - x;
    auto lhs = shifted_prob(x, w, Engine::naive);
    auto r1 = prob_in_interval(w, Bound::from_double(-a), Bound::from_double(a), Engine::naive);
    auto r2 = prob_in_interval(w, Bound::from_double(-b), Bound::from_double(b), Engine::naive);
    CHECK(2 * lhs.numerator == r1.numerator + r2.numerator);
  }
}

TEST_CASE("engine equivalence on seeded instances") {
  Rng rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    int n = static_cast<int>(rng.uniform_int(2, 16));
    WeightVector w = random_floats(rng, n);
    auto pn = prob_in_interval(w, -1.0, 1.0, Engine::naive);
    auto pm = prob_in_interval(w, -1.0, 1.0, Engine::mim);
    CHECK(std::fabs(pn.float_value - pm.float_value) <= 1e-12);
  }
  // exact mode: equality of counts
  for (int trial = 0; trial < 25; ++trial) {
    int n = static_cast<int>(rng.uniform_int(2, 14));
    std::vector<Rational> rs;
    for (int i = 0; i < n; ++i)
      rs.emplace_back(rng.uniform_int(-12, 12), rng.uniform_int(1, 12));
    WeightVector w = WeightVector::from_rationals(rs);
    auto pn = prob_in_interval(w, -1.0, 1.0, Engine::naive);
    auto pm = prob_in_interval(w, -1.0, 1.0, Engine::mim);
    CHECK(pn.numerator == pm.numerator);
    CHECK(pn.exact);
    CHECK(pm.exact);
  }
}

TEST_CASE("tail equals the mirrored interval count") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = static_cast<int>(rng.uniform_int(2, 12));
    WeightVector w = random_floats(rng, n);
    double m = w.sum_abs() + 1.0;
    for (double t : {0.25, 0.5, 1.0, 1.5}) {
      auto a = tail_prob(w, t, Engine::naive);
      auto b = prob_in_interval(w, Bound::from_double(-m), Bound::from_double(-t),
                                Engine::naive);
      CHECK(a.numerator == b.numerator);
    }
  }
}

TEST_CASE("distributions are normalized and symmetric") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    int n = static_cast<int>(rng.uniform_int(2, 12));
    WeightVector w = random_floats(rng, n);
    auto d = enumerate_naive(w);
    std::uint64_t sum = 0;
    for (const auto& a : d.atoms) sum += a.count;
    CHECK(sum == d.total());
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      const auto& lo = d.atoms[i];
      const auto& hi = d.atoms[d.atoms.size() - 1 - i];
      CHECK(lo.value == -hi.value);
      CHECK(lo.count == hi.count);
      if (i > 0) CHECK(d.atoms[i - 1].value < lo.value);
    }
  }
}

TEST_CASE("boundary window flags") {
  // plain doubles, sums at exactly +-1: closed-interval semantics includes them
  auto w = WeightVector::from_doubles({0.5, 0.5});
  auto p = prob_in_interval(w, -1.0, 1.0, Engine::naive);
  CHECK(p.numerator == 4);
  CHECK(p.boundary_resolved == 2);
  CHECK(!p.exact);

  // the rational route decides the same query with no ambiguity
  auto pe = prob_in_interval(rationals({Rational(1, 2), Rational(1, 2)}), -1.0, 1.0);
  CHECK(pe.numerator == 4);
  CHECK(pe.boundary_resolved == 0);
  CHECK(pe.exact);
}

TEST_CASE("capacity and configuration") {
  std::vector<double> v(27, 0.1);
  CHECK_THROWS_AS(enumerate_naive(WeightVector::from_doubles(v)), capacity_error);
  CHECK_THROWS_AS(prob_in_interval(WeightVector::from_doubles(v), 0, 1, Engine::naive),
                  capacity_error);
  DistConfig tight;
  tight.naive_cap = 4;
  std::vector<double> v5(5, 0.1);
  CHECK_THROWS_AS(enumerate_naive(WeightVector::from_doubles(v5), tight), capacity_error);
  // mim handles it
  auto p = prob_in_interval(WeightVector::from_doubles(v5), -1, 1, Engine::mim, tight);
  CHECK(p.numerator == p.denominator);
}

TEST_CASE("thread count does not change results") {
  Rng rng(5);
  WeightVector w = random_floats(rng, 14);
  DistConfig c1, c4;
  c4.threads = 4;
  auto p1 = prob_in_interval(w, -0.8, 0.9, Engine::naive, c1);
  auto p4 = prob_in_interval(w, -0.8, 0.9, Engine::naive, c4);
  CHECK(p1.numerator == p4.numerator);
  CHECK(p1.boundary_resolved == p4.boundary_resolved);
}

TEST_CASE("csv export shape") {
  auto d = enumerate_naive(rationals({Rational(1, 2), Rational(1, 2)}));
  std::ostringstream os;
  d.write_csv(os);
  CHECK(os.str().rfind("value,count,prob\n", 0) == 0);
  CHECK(os.str().find("0,2,0.5") != std::string::npos);
}

TEST_CASE("weights files parse with exactness metadata") {
  std::istringstream in(
      "# comment line\n"
      "0.5\n"
      "1/4       # trailing comment\n"
      "\n"
      "sq:1/20\n"
      "0.3333333333333333333333333333\n");
  auto w = WeightVector::parse(in, "inline");
  REQUIRE(w.size() == 4);
  CHECK(w.entry(0).exact.has_value());
  CHECK(*w.entry(1).exact == Rational(1, 4));
  CHECK(!w.entry(2).exact.has_value());
  CHECK(*w.entry(2).exact_sq == Rational(1, 20));
  CHECK(!w.entry(3).exact.has_value());  // too many digits for exact ingestion
  CHECK(w.value(3) == doctest::Approx(1.0 / 3.0));

  std::istringstream bad("0.5\nnot-a-number\n");
  try {
    WeightVector::parse(bad, "badfile");
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("badfile:2") != std::string::npos);
  }
}

TEST_CASE("norm bookkeeping") {
  auto w = rationals({Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)});
  CHECK(w.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w.exact_mode());
  CHECK(w.squared_exact_mode());
  CHECK(equal_sq(5).squared_exact_mode());
  CHECK(!equal_sq(5).exact_mode());
}
