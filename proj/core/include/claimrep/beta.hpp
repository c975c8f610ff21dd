#pragma once

namespace claimrep {

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), evaluated with the standard
// continued fraction expansion.
double regularized_incomplete_beta(double a, double b, double x);

inline double beta_cdf(double a, double b, double x) {
  return regularized_incomplete_beta(a, b, x);
}

// q-quantile of Beta(a, b) by monotone CDF inversion (bisection refined to
// ~1e-14; well inside the 1e-9 contract). Throws std::invalid_argument for
// q outside (0,1) or non-positive parameters.
double beta_quantile(double a, double b, double q);

}  // namespace claimrep
