#pragma once

// Small numeric helpers shared across the library: log-domain accumulation,
// the regularized incomplete gamma function (chi-square and gamma CDFs), and
// a weighted least-squares line fit used for extrapolation in epsilon.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace asepkpz {

// log(exp(a) + exp(b)), safe for -inf arguments.
double log_add_exp(double a, double b);

// log(sum_i exp(x_i)); returns -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> x);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x)/Gamma(a), a > 0,
// x >= 0. Series for x < a+1, continued fraction otherwise.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// CDF of the Gamma(shape, rate=1) law.
double gamma_cdf(double shape, double x);

// Survival function of the chi-square law with dof degrees of freedom,
// i.e. P(X > x). Used to turn goodness-of-fit statistics into p-values.
double chi_square_sf(double x, int dof);

// One-sample Kolmogorov-Smirnov distance of a weighted empirical CDF against
// a reference CDF given as cdf values at the sample points. `values` need not
// be sorted; `weights` are nonnegative and get normalized internally (pass an
// empty span for the unweighted case).
double ks_distance(std::span<const double> values, std::span<const double> weights,
                   std::span<const double> cdf_at_values);

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_stderr = 0.0;
  double slope_stderr = 0.0;
};

// Weighted least squares y = intercept + slope * x with per-point standard
// errors sigma (all > 0). Needs at least two distinct x. The intercept is the
// extrapolated value at x = 0.
LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                          std::span<const double> sigma);

}  // namespace asepkpz
