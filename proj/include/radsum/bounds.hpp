#pragma once

#include "json.hpp"
#include "radsum/report.hpp"

namespace radsum::bounds {

/// The paper-level constants, evaluated once from the numerics module.
struct BoundTable {
  double c_star;         // 1 / (4 Phibar(sqrt 2)) ~ 3.1787
  double phi_bar_sqrt2;  // Phibar(sqrt 2)
  double G_quarter;      // G(1/4) ~ 0.42768
  double F_quarter;      // 13/32 exactly

  nlohmann::json to_json() const;
};

BoundTable make_bound_table();

/// G(c) = (1 - Phibar(c^{-1/2}) / (2 Phibar(sqrt 2))) / 2. Strictly decreasing,
/// G(c) -> 1/2 as c -> 0 (the limit is the caller's business: c <= 0 throws).
double eval_G(double c);

/// F(c) = (1 - 3 c^2) / 2.
double eval_F(double c);

/// U_K(i) = ((K+1)^2 - i) / (2K+1)^2, linear decreasing in i; K >= 1, i real.
double eval_U(int K, double i);

/// h(k) = 2^{1-k} G(U_k(k)) + (1 - 2^{1-k}) G(U_k(k+2)), k >= 2.
double eval_h(int k);

/// 2^{1-k} G(U_k(k)) + (1 - 2^{1-k}) / 2, k >= 2.
double eval_half_mix(int k);

double eval_H(double y);  // y^4 Phibar(y), y > 0
double eval_L(double y);  // y^3 phi(y),    y > 0

/// Z_xi(eps) = 2 / sqrt(1 + xi eps); requires 1 + xi eps > 0.
double eval_Z(double xi, double eps);

/// min(1, c_star * Phibar(y)): valid Rademacher tail majorant for y >= sqrt 2.
double bd_tail_bound(double y);

/// The grid ceiling for H in the G>F check: 3/(2 c_star) = 6 Phibar(sqrt 2).
double g_dominates_f_threshold();

/// Grid check that H(y) stays below g_dominates_f_threshold() on (0, grid_max]
/// and that G(c) > F(c) at every image point c = 1/y^2. Also tracks max L.
VerificationReport check_G_dominates_F(double grid_max, double grid_step);

struct ConcavityReport {
  double xi = 0.0;
  double lo = 0.0, hi = 0.0;
  int grid_size = 0;
  double max_second_difference = 0.0;          // max over interior grid points
  double max_closed_form_second_derivative = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Checks concavity of eps -> Phi(Z_xi(eps)) on [lo, hi] two ways: the closed
/// form of the second derivative and centered second differences. Passes iff
/// both stay <= 1e-9 at every grid point.
ConcavityReport check_concavity(double xi, double lo, double hi, int grid_size);

/// Reproduces the chain Phi(sqrt3)/2 + Phi(3)/2 >= 0.9785 > 0.9773 > Phi(2).
VerificationReport check_endpoint_value();

}  // namespace radsum::bounds
