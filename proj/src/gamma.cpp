#include "fdia/gamma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fdia {
namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;

// Series: P(a,x) = x^a e^-x / Gamma(a) * sum_n x^n / (a(a+1)...(a+n)).
double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("reg_lower_gamma: series did not converge");
}

// Modified Lentz continued fraction for Q(a,x); valid for x >= a + 1.
double upper_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("reg_lower_gamma: continued fraction did not converge");
}

}  // namespace

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("reg_lower_gamma: a must be positive");
  }
  if (!(x >= 0.0)) {
    throw std::invalid_argument("reg_lower_gamma: x must be non-negative");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_cf(a, x);
}

double chi2_quantile(double prob, double dof) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::invalid_argument("chi2_quantile: prob must lie in (0, 1)");
  }
  if (!(dof > 0.0)) {
    throw std::invalid_argument("chi2_quantile: dof must be positive");
  }
  const double a = 0.5 * dof;

  // Wilson-Hilferty start: chi2 ~ dof * (1 - 2/(9 dof) + z sqrt(2/(9 dof)))^3.
  const double z = [prob] {
    // Acklam-style rational approximation of the normal quantile; only used
    // as an initial guess, Newton below does the convergence.
    const double p = prob;
    static const double an[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double bn[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double cn[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double dn[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
      const double q = std::sqrt(-2.0 * std::log(p));
      return (((((cn[0] * q + cn[1]) * q + cn[2]) * q + cn[3]) * q + cn[4]) * q + cn[5]) /
             ((((dn[0] * q + dn[1]) * q + dn[2]) * q + dn[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
      const double q = std::sqrt(-2.0 * std::log(1.0 - p));
      return -(((((cn[0] * q + cn[1]) * q + cn[2]) * q + cn[3]) * q + cn[4]) * q + cn[5]) /
             ((((dn[0] * q + dn[1]) * q + dn[2]) * q + dn[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((an[0] * r + an[1]) * r + an[2]) * r + an[3]) * r + an[4]) * r + an[5]) * q /
           (((((bn[0] * r + bn[1]) * r + bn[2]) * r + bn[3]) * r + bn[4]) * r + 1.0);
  }();
  const double h = 2.0 / (9.0 * dof);
  double x = dof * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
  if (!(x > 0.0)) x = 0.5 * dof;

  // Newton on F(x) = P(a, x/2) - prob; F'(x) is the chi2 density.
  for (int i = 0; i < 200; ++i) {
    const double f = reg_lower_gamma(a, 0.5 * x) - prob;
    const double logpdf =
        (a - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(a) - std::log(2.0);
    const double pdf = std::exp(logpdf);
    double step = (pdf > 0.0) ? f / pdf : 0.0;
    // Damp steps that would leave the support.
    while (x - step <= 0.0) step *= 0.5;
    x -= step;
    // Relative criterion: deep-tail quantiles can be arbitrarily small.
    if (std::abs(step) <= 1e-14 * x) return x;
    if (pdf == 0.0) break;
  }
  // Bisection fallback for extreme tails where the density underflows.
  double lo = 0.0, hi = std::max(2.0 * x, 1.0);
  while (reg_lower_gamma(a, 0.5 * hi) < prob) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("chi2_quantile: bracketing failed");
  }
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (reg_lower_gamma(a, 0.5 * mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fdia
