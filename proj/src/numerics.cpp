#include "radsum/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace radsum::numerics {
namespace {

// Coefficients from W. J. Cody, "Rational Chebyshev approximations for the
// error function", Math. Comp. 23 (1969); netlib SPECFUN values, good to
// ~18 significant digits in exact arithmetic.
constexpr double kA[5] = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                          3209.37758913846947, 0.185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                          2844.23683343917062};
constexpr double kC[9] = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                          298.635138197400131,  881.95222124176909,  1712.04761263407058,
                          2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                          1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                          3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {0.305326634961232344, 0.360344899949804439, 0.125781726111229246,
                          0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412,
                          0.0605183413124413191, 0.00233520497626869185};

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kThresh = 0.46875;
// erfc underflows to zero beyond this argument.
constexpr double kErfcBig = 26.543;

// erf(x) for |x| <= 0.46875.
double erf_small(double x) {
  double ysq = x * x;
  double xnum = kA[4] * ysq;
  double xden = ysq;
  for (int i = 0; i < 3; ++i) {
    xnum = (xnum + kA[i]) * ysq;
    xden = (xden + kB[i]) * ysq;
  }
  return x * (xnum + kA[3]) / (xden + kB[3]);
}

// exp(-y*y) with the split-argument trick that keeps the relative error of
// the product representation small for large y.
double exp_minus_ysq(double y) {
  double ysq = std::trunc(y * 16.0) / 16.0;
  double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

// erfc(y) for 0.46875 <= y <= 4.
double erfc_mid(double y) {
  double xnum = kC[8] * y;
  double xden = y;
  for (int i = 0; i < 7; ++i) {
    xnum = (xnum + kC[i]) * y;
    xden = (xden + kD[i]) * y;
  }
  return exp_minus_ysq(y) * (xnum + kC[7]) / (xden + kD[7]);
}

// erfc(y) for y > 4.
double erfc_large(double y) {
  if (y >= kErfcBig) return 0.0;
  double ysq = 1.0 / (y * y);
  double xnum = kP[5] * ysq;
  double xden = ysq;
  for (int i = 0; i < 4; ++i) {
    xnum = (xnum + kP[i]) * ysq;
    xden = (xden + kQ[i]) * ysq;
  }
  double r = ysq * (xnum + kP[4]) / (xden + kQ[4]);
  r = (kInvSqrtPi - r) / y;
  return exp_minus_ysq(y) * r;
}

double erfc_positive(double y) {
  if (y <= kThresh) return 1.0 - erf_small(y);
  if (y <= 4.0) return erfc_mid(y);
  return erfc_large(y);
}

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}

}  // namespace

double erf(double x) {
  double y = std::fabs(x);
  if (y <= kThresh) return erf_small(x);
  double r = 1.0 - erfc_positive(y);
  return x < 0 ? -r : r;
}

double erfc(double x) {
  if (x < 0) return 2.0 - erfc_positive(-x);
  return erfc_positive(x);
}

double std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return 0.5 * erfc(-x * kInvSqrt2);
}

double std_normal_upper_tail(double x) {
  require_finite(x, "std_normal_upper_tail");
  return 0.5 * erfc(x * kInvSqrt2);
}

double std_normal_pdf(double x) {
  require_finite(x, "std_normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

}  // namespace radsum::numerics
