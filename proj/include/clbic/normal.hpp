#pragma once

namespace clbic {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal inverse CDF. Throws DataError unless 0 < p < 1.
double normal_quantile(double p);

/// Threshold mu with Phi(mu) = p: a Gaussian coordinate W satisfies
/// P(W >= -mu) = p.
inline double threshold_from_theta(double p) { return normal_quantile(p); }

/// P(W1 >= h, W2 >= k) for a standard bivariate normal with correlation rho.
///
/// Integrates the bivariate density along the correlation path from 0 to rho
/// (Plackett's identity), with r = sin(t) to remove the endpoint singularity,
/// by adaptive Simpson quadrature to an absolute error well below 1e-8.
/// |rho| = 1 uses the comonotone / antitone limits.
double orthant_prob(double h, double k, double rho);

}  // namespace clbic
