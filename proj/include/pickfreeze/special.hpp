#pragma once

namespace pickfreeze {

// standard normal CDF
double normal_cdf(double x);

// inverse standard normal CDF; p must lie in (0, 1)
double normal_quantile(double p);

// regularized lower incomplete gamma P(a, x)
double gamma_p(double a, double x);

// quantile of the chi-square law with dof degrees of freedom at probability p
double chi2_quantile(double p, int dof);

}  // namespace pickfreeze
