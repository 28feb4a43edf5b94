#pragma once

namespace radsum::numerics {

/// erf and erfc by W. J. Cody's rational minimax approximations
/// (netlib SPECFUN coefficients, ~1e-16 relative accuracy in double).
/// erfc is evaluated directly in the tail, never as 1 - erf.
double erf(double x);
double erfc(double x);

/// Phi(x), the standard normal distribution function.
/// Absolute error <= 1e-12 on [-8, 8]; nondecreasing on any sorted grid.
/// Throws std::domain_error on non-finite input.
double std_normal_cdf(double x);

/// Phibar(x) = 1 - Phi(x) = Phi(-x), computed directly through erfc so the
/// relative error stays <= 1e-10 for x in [0, 8] (no 1 - Phi cancellation).
double std_normal_upper_tail(double x);

/// phi(x) = exp(-x^2/2)/sqrt(2 pi).
double std_normal_pdf(double x);

}  // namespace radsum::numerics
