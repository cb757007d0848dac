#include "asepkpz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace asepkpz {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double log_sum_exp(std::span<const double> x) {
  double m = kNegInf;
  for (double v : x) m = std::max(m, v);
  if (m == kNegInf || std::isinf(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

namespace {

// Series representation, converges fast for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), modified Lentz. Good for x >= a+1.
double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double gamma_cdf(double shape, double x) {
  if (x <= 0.0) return 0.0;
  return gamma_p(shape, x);
}

double chi_square_sf(double x, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

double ks_distance(std::span<const double> values, std::span<const double> weights,
                   std::span<const double> cdf_at_values) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("ks_distance: empty sample");
  if (cdf_at_values.size() != n) throw std::invalid_argument("ks_distance: size mismatch");
  const bool weighted = !weights.empty();
  if (weighted && weights.size() != n) throw std::invalid_argument("ks_distance: size mismatch");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

  double wtot = 0.0;
  if (weighted) {
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("ks_distance: negative weight");
      wtot += w;
    }
    if (wtot <= 0.0) throw std::invalid_argument("ks_distance: zero total weight");
  } else {
    wtot = static_cast<double>(n);
  }

  double cum = 0.0;
  double dist = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    const double before = cum / wtot;
    cum += weighted ? weights[i] : 1.0;
    const double after = cum / wtot;
    const double f = cdf_at_values[i];
    dist = std::max(dist, std::max(std::abs(after - f), std::abs(before - f)));
  }
  return dist;
}

LineFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                          std::span<const double> sigma) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n || sigma.size() != n)
    throw std::invalid_argument("fit_line_weighted: need >= 2 points with matching sizes");
  double sw = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sigma[i] > 0.0)) throw std::invalid_argument("fit_line_weighted: sigma must be > 0");
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    sx += w * x[i];
    sxx += w * x[i] * x[i];
    sy += w * y[i];
    sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) throw std::invalid_argument("fit_line_weighted: degenerate x values");
  LineFit fit;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept_stderr = std::sqrt(sxx / det);
  fit.slope_stderr = std::sqrt(sw / det);
  return fit;
}

}  // namespace asepkpz
