#pragma once

namespace hdlrt {

// Standard normal CDF, 0.5 * erfc(-x / sqrt(2)).
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

// alpha-quantile u_alpha of the standard normal. Rational approximation
// followed by one Newton step on the CDF. Throws InvalidAlpha outside (0, 1).
double normal_quantile(double alpha);

}  // namespace hdlrt
