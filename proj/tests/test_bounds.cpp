#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracle_constants.hpp"
#include "radsum/bounds.hpp"
#include "radsum/numerics.hpp"

using namespace radsum;
using namespace radsum::bounds;

TEST_CASE("G at the paper's display points and the oracle values") {
  CHECK(std::fabs(eval_G(0.25) - 0.42768) <= 1e-5);
  CHECK(std::fabs(eval_G(0.25) - oracle::kGQuarter) <= 1e-12);
  CHECK(std::fabs(eval_G(2.0 / 7.0) - 0.40246) <= 1e-5);
  CHECK(std::fabs(eval_G(2.0 / 7.0) - oracle::kGTwoSevenths) <= 1e-12);
  CHECK(std::fabs(eval_G(1e-8) - 0.5) <= 1e-6);
  CHECK_THROWS_AS(eval_G(0.0), std::domain_error);
  CHECK_THROWS_AS(eval_G(-1.0), std::domain_error);
}

TEST_CASE("G is strictly decreasing") {
  double prev = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    double c = 0.01 * k;
    double g = eval_G(c);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("F: quadratic bound values") {
  CHECK(eval_F(0.25) == 0.40625);  // 13/32 exactly
  CHECK(eval_F(0.0) == 0.5);
  CHECK(std::fabs(eval_F(1.0 / std::sqrt(3.0))) <= 1e-15);
}

TEST_CASE("U_K(i) values") {
  CHECK(eval_U(2, 2.0) == 0.28);  // 7/25
  CHECK(eval_U(2, 4.0) == 0.2);   // 5/25
  for (int K = 2; K <= 10; ++K) CHECK(eval_U(K, K + 0.75) == 0.25);
  for (int K = 2; K <= 64; ++K) {
    CHECK(eval_U(K, static_cast<double>(K)) > 0.25);
    CHECK(eval_U(K, static_cast<double>(K + 2)) < 0.25);
  }
  CHECK_THROWS_AS(eval_U(0, 1.0), std::domain_error);
}

TEST_CASE("h(k) and the half mix majorize G(1/4) on k in {2..64}") {
  CHECK(std::fabs(eval_h(2) - 0.4331) <= 5e-4);
  CHECK(std::fabs(eval_h(2) - oracle::kH2) <= 1e-12);
  CHECK(std::fabs(eval_half_mix(2) - 0.4533) <= 5e-4);
  CHECK(std::fabs(eval_half_mix(2) - oracle::kHalfMix2) <= 1e-12);
  double gq = eval_G(0.25);
  for (int k = 2; k <= 64; ++k) {
    CHECK(eval_h(k) >= gq);
    CHECK(eval_half_mix(k) >= gq);
    CHECK(eval_half_mix(k) >= eval_h(k));  // 1/2 >= G(c) for the big component
  }
  // monotone approach from above
  CHECK(eval_h(64) - gq > 0.0);
  CHECK(eval_h(64) - gq < 1e-3);
  CHECK_THROWS_AS(eval_h(1), std::domain_error);
  CHECK_THROWS_AS(eval_half_mix(1), std::domain_error);
}

TEST_CASE("H <= L on the grid; L peaks at sqrt 3") {
  CHECK(std::fabs(eval_L(std::sqrt(3.0)) - 0.4625) <= 5e-4);
  CHECK(std::fabs(eval_L(std::sqrt(3.0)) - oracle::kLSqrt3) <= 1e-12);
  double max_L = 0.0, at = 0.0;
  for (int k = 1; k <= 8000; ++k) {
    double y = 0.001 * k;
    CHECK(eval_H(y) <= eval_L(y) * (1.0 + 1e-12));
    double L = eval_L(y);
    if (L > max_L) {
      max_L = L;
      at = y;
    }
  }
  CHECK(std::fabs(at - std::sqrt(3.0)) <= 0.001);
  CHECK_THROWS_AS(eval_H(0.0), std::domain_error);
  CHECK_THROWS_AS(eval_L(-1.0), std::domain_error);
}

TEST_CASE("G dominates F on the whole grid") {
  auto r = check_G_dominates_F(8.0, 0.001);
  CHECK(r.pass);
  CHECK(r.details.at("max_H") < g_dominates_f_threshold());
  CHECK(r.margin >= 0.004);
  CHECK(std::fabs(r.details.at("max_L") - 0.4625) <= 5e-4);
  CHECK(g_dominates_f_threshold() - r.details.at("max_L") >= 0.004);
  CHECK(r.details.at("min_G_minus_F") > 0.0);
  // the headline gap at c = 1/4
  CHECK(std::fabs(eval_G(0.25) - eval_F(0.25) - 0.0214) <= 1e-4);
  CHECK(eval_G(0.25) - eval_F(0.25) > 0.021);
}

TEST_CASE("G > F pointwise on (0, 10]") {
  for (int k = 1; k <= 1000; ++k) {
    double c = 0.01 * k;
    CHECK(eval_G(c) > eval_F(c));
  }
}

TEST_CASE("Z_xi evaluations") {
  CHECK(eval_Z(0.75, 0.0) == 2.0);
  CHECK(eval_Z(-123.0, 0.0) == 2.0);
  CHECK(std::fabs(eval_Z(0.75, 4.0 / 9.0) - std::sqrt(3.0)) <= 1e-15);
  CHECK(std::fabs(eval_Z(-1.25, 4.0 / 9.0) - 3.0) <= 1e-14);
  CHECK_THROWS_AS(eval_Z(-3.0, 1.0), std::domain_error);
}

TEST_CASE("concavity of Phi(Z_xi) on [0, 4/9]") {
  auto r = check_concavity(0.75, 0.0, 4.0 / 9.0, 1000);
  CHECK(r.pass);
  CHECK(r.max_closed_form_second_derivative <= 1e-9);
  CHECK(r.max_second_difference <= 1e-9);

  auto r2 = check_concavity(-1.25, 0.0, 4.0 / 9.0, 1000);
  CHECK(r2.pass);

  // the closed form vanishes exactly at the corner 1 - 3 xi eps = 0
  double xi = 0.75, eps = 4.0 / 9.0;
  double z = eval_Z(xi, eps);
  double d2 = -0.5 * numerics::std_normal_pdf(z) * std::pow(1.0 + xi * eps, -3.5) * xi * xi *
              (1.0 - 3.0 * xi * eps);
  CHECK(std::fabs(d2) <= 1e-15);

  CHECK_THROWS_AS(check_concavity(0.75, 0.0, 4.0 / 9.0, 2), std::domain_error);
}

TEST_CASE("endpoint chain around Phi(2)") {
  auto r = check_endpoint_value();
  CHECK(r.pass);
  double mix = r.worst_point.at("mix").get<double>();
  double phi2 = r.worst_point.at("phi_2").get<double>();
  CHECK(std::fabs(mix - 0.9785) <= 5e-4);
  CHECK(std::fabs(phi2 - 0.9772) <= 5e-4);
  CHECK(std::fabs(r.margin - 0.00126) <= 1e-5);
  CHECK(mix >= 0.9785);
  CHECK(0.9773 > phi2);
}

TEST_CASE("Bentkus-Dzindzalieta tail majorant") {
  CHECK(std::fabs(bd_tail_bound(std::sqrt(2.0)) - 0.25) <= 1e-10);
  CHECK(std::fabs(bd_tail_bound(2.0) - 0.0723) <= 1e-4);
  CHECK(std::fabs(bd_tail_bound(2.0) - oracle::kCStarPhiBar2) <= 1e-12);
  CHECK(bd_tail_bound(-1.0) == 1.0);
  // definition consistency: 1/2 - c* Phibar(U^{-1/2}) = G(U)
  for (int K = 2; K <= 64; ++K) {
    for (double i : {static_cast<double>(K), static_cast<double>(K + 2), 1.5 * K + 1.0}) {
      double U = eval_U(K, i);
      CHECK(std::fabs(0.5 - bd_tail_bound(1.0 / std::sqrt(U)) - eval_G(U)) <= 1e-12);
    }
  }
}

TEST_CASE("bound table invariants") {
  auto t = make_bound_table();
  CHECK(t.c_star == 1.0 / (4.0 * t.phi_bar_sqrt2));
  CHECK(t.F_quarter == 0.40625);
  CHECK(t.G_quarter >= 0.42768);
  CHECK(t.G_quarter <= 0.42769);
  CHECK(std::fabs(t.c_star - 3.178) <= 1e-3);
  CHECK(std::fabs(t.c_star - oracle::kCStar) <= 1e-12);
  CHECK(std::fabs(t.phi_bar_sqrt2 - oracle::kPhiBarSqrt2) <= 1e-13);
}
