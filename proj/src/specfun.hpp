#pragma once

#include "errors.hpp"

namespace sn {

// Special functions backing the detector thresholds: error function and
// inverse, regularized lower incomplete gamma and inverse.  Accuracy
// targets: erf within 1e-12 of reference on |x| <= 6, inverse round trips
// within 1e-10.

double erf(double x);

// Inverse on (-1, 1); throws DomainError outside.
double erfinv(double y);

// P(s, x) = gamma(s, x) / Gamma(s), s > 0, x >= 0.  Series expansion for
// x < s + 1 and a continued fraction otherwise.
double reg_lower_gamma(double s, double x);

// x such that P(s, x) = y for y in (0, 1); throws DomainError otherwise.
double inv_reg_lower_gamma(double y, double s);

} // namespace sn
