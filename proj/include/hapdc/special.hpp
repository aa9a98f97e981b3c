#pragma once

// Modified Bessel functions of the first kind and the generalized Marcum Q-function.

namespace hapdc::special {

/// I_n(x) for integer n >= 0 and x >= 0. Throws NumericalError on overflow.
double bessel_i(int order, double x);

/// e^{-x} I_n(x); finite for every x >= 0.
double bessel_i_scaled(int order, double x);

/// log I_n(x); -inf when I_n(x) = 0.
double log_bessel_i(int order, double x);

/// Q_m(a, y) = Pr(||X|| > y) for X a 2m-dimensional Gaussian vector with unit
/// variances and mean norm a. Truncation error <= 1e-15 relative.
/// Throws NumericalError if the series fails to converge.
double marcum_q(int order, double a, double y);

/// 1 - Q_m(a, y), summed directly so that small values keep their relative accuracy.
double marcum_p(int order, double a, double y);

}  // namespace hapdc::special
