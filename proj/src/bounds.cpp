#include "radsum/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "radsum/numerics.hpp"

namespace radsum::bounds {

using numerics::std_normal_cdf;
using numerics::std_normal_pdf;
using numerics::std_normal_upper_tail;

namespace {

double phi_bar_sqrt2_value() {
  static const double v = std_normal_upper_tail(std::sqrt(2.0));
  return v;
}

double c_star_value() {
  static const double v = 1.0 / (4.0 * phi_bar_sqrt2_value());
  return v;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

}  // namespace

nlohmann::json BoundTable::to_json() const {
  return {{"c_star", c_star},
          {"phi_bar_sqrt2", phi_bar_sqrt2},
          {"G_quarter", G_quarter},
          {"F_quarter", F_quarter}};
}

BoundTable make_bound_table() {
  return BoundTable{c_star_value(), phi_bar_sqrt2_value(), eval_G(0.25), eval_F(0.25)};
}

double eval_G(double c) {
  require_finite(c, "eval_G");
  if (c <= 0) throw std::domain_error("eval_G: requires c > 0");
  return 0.5 * (1.0 - 0.5 * std_normal_upper_tail(1.0 / std::sqrt(c)) / phi_bar_sqrt2_value());
}

double eval_F(double c) {
  require_finite(c, "eval_F");
  return 0.5 * (1.0 - 3.0 * c * c);
}

double eval_U(int K, double i) {
  if (K < 1) throw std::domain_error("eval_U: requires K >= 1");
  require_finite(i, "eval_U");
  double kp1 = static_cast<double>(K) + 1.0;
  double d = 2.0 * static_cast<double>(K) + 1.0;
  return (kp1 * kp1 - i) / (d * d);
}

double eval_h(int k) {
  if (k < 2) throw std::domain_error("eval_h: requires k >= 2");
  double pk = std::ldexp(1.0, 1 - k);  // 2^{1-k}
  return pk * eval_G(eval_U(k, k)) + (1.0 - pk) * eval_G(eval_U(k, k + 2));
}

double eval_half_mix(int k) {
  if (k < 2) throw std::domain_error("eval_half_mix: requires k >= 2");
  double pk = std::ldexp(1.0, 1 - k);
  return pk * eval_G(eval_U(k, k)) + (1.0 - pk) * 0.5;
}

double eval_H(double y) {
  require_finite(y, "eval_H");
  if (y <= 0) throw std::domain_error("eval_H: requires y > 0");
  return y * y * y * y * std_normal_upper_tail(y);
}

double eval_L(double y) {
  require_finite(y, "eval_L");
  if (y <= 0) throw std::domain_error("eval_L: requires y > 0");
  return y * y * y * std_normal_pdf(y);
}

double eval_Z(double xi, double eps) {
  require_finite(xi, "eval_Z");
  require_finite(eps, "eval_Z");
  double t = 1.0 + xi * eps;
  if (t <= 0) throw std::domain_error("eval_Z: requires 1 + xi*eps > 0");
  return 2.0 / std::sqrt(t);
}

double bd_tail_bound(double y) {
  require_finite(y, "bd_tail_bound");
  return std::min(1.0, c_star_value() * std_normal_upper_tail(y));
}

double g_dominates_f_threshold() { return 6.0 * phi_bar_sqrt2_value(); }

VerificationReport check_G_dominates_F(double grid_max, double grid_step) {
  if (!(grid_max > 0) || !(grid_step > 0))
    throw std::domain_error("check_G_dominates_F: grid_max and grid_step must be > 0");

  const double ceiling = g_dominates_f_threshold();
  double max_H = -1.0, max_H_at = 0.0;
  double max_L = -1.0, max_L_at = 0.0;
  double min_GF_gap = std::numeric_limits<double>::infinity();
  double min_GF_at = 0.0;
  long steps = static_cast<long>(std::floor(grid_max / grid_step + 1e-9));
  for (long k = 1; k <= steps; ++k) {
    double y = static_cast<double>(k) * grid_step;
    double H = eval_H(y);
    if (H > max_H) {
      max_H = H;
      max_H_at = y;
    }
    double L = eval_L(y);
    if (L > max_L) {
      max_L = L;
      max_L_at = y;
    }
    double c = 1.0 / (y * y);
    double gap = eval_G(c) - eval_F(c);
    if (gap < min_GF_gap) {
      min_GF_gap = gap;
      min_GF_at = c;
    }
  }

  VerificationReport r;
  r.claim_id = "G_dominates_F";
  r.margin = ceiling - max_H;
  r.pass = max_H < ceiling && min_GF_gap > 0;
  r.worst_point = {{"y_at_max_H", max_H_at}, {"c_at_min_gap", min_GF_at}};
  r.grid_spec = "y in (0, " + std::to_string(grid_max) + "], step " + std::to_string(grid_step);
  r.details["max_H"] = max_H;
  r.details["max_L"] = max_L;
  r.details["max_L_at"] = max_L_at;
  r.details["threshold"] = ceiling;
  r.details["min_G_minus_F"] = min_GF_gap;
  return r;
}

nlohmann::json ConcavityReport::to_json() const {
  return {{"xi", xi},
          {"interval", {lo, hi}},
          {"grid_size", grid_size},
          {"max_second_difference", max_second_difference},
          {"max_closed_form_second_derivative", max_closed_form_second_derivative},
          {"pass", pass}};
}

ConcavityReport check_concavity(double xi, double lo, double hi, int grid_size) {
  if (grid_size < 3) throw std::domain_error("check_concavity: grid_size >= 3");
  if (!(lo < hi)) throw std::domain_error("check_concavity: requires lo < hi");

  auto f = [xi](double eps) { return std_normal_cdf(eval_Z(xi, eps)); };
  auto d2_closed = [xi](double eps) {
    double z = eval_Z(xi, eps);  // throws if outside the domain
    double t = 1.0 + xi * eps;
    return -0.5 * std_normal_pdf(z) * std::pow(t, -3.5) * xi * xi * (1.0 - 3.0 * xi * eps);
  };

  const double tol = 1e-9;
  double h = (hi - lo) / static_cast<double>(grid_size - 1);
  double max_d2 = -std::numeric_limits<double>::infinity();
  double max_diff = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_size; ++k) {
    double eps = lo + h * static_cast<double>(k);
    max_d2 = std::max(max_d2, d2_closed(eps));
    if (k > 0 && k + 1 < grid_size) {
      double second = (f(eps + h) - 2.0 * f(eps) + f(eps - h)) / (h * h);
      max_diff = std::max(max_diff, second);
    }
  }

  ConcavityReport r;
  r.xi = xi;
  r.lo = lo;
  r.hi = hi;
  r.grid_size = grid_size;
  r.max_second_difference = max_diff;
  r.max_closed_form_second_derivative = max_d2;
  r.pass = max_d2 <= tol && max_diff <= tol;
  return r;
}

VerificationReport check_endpoint_value() {
  double mix = 0.5 * std_normal_cdf(std::sqrt(3.0)) + 0.5 * std_normal_cdf(3.0);
  double phi2 = std_normal_cdf(2.0);
  VerificationReport r;
  r.claim_id = "endpoint_chain";
  r.pass = mix >= 0.9785 && 0.9773 > phi2;
  r.margin = mix - phi2;
  r.worst_point = {{"mix", mix}, {"phi_2", phi2}};
  r.grid_spec = "point evaluation";
  r.details["mix_minus_09785"] = mix - 0.9785;
  r.details["09773_minus_phi2"] = 0.9773 - phi2;
  return r;
}

}  // namespace radsum::bounds
