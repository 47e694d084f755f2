#pragma once

namespace fdia {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
// Series expansion for x < a + 1, continued fraction otherwise; both
// converge to ~1e-14 relative accuracy within the iteration cap.
double reg_lower_gamma(double a, double x);

// Quantile of the chi-squared distribution with dof degrees of freedom:
// the x such that P(dof/2, x/2) = prob, prob in (0, 1).
double chi2_quantile(double prob, double dof);

}  // namespace fdia
