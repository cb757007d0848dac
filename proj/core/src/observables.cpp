#include "asepkpz/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asepkpz {

std::vector<double> normalized_weights(std::span<const double> log_weights) {
  std::vector<double> w(log_weights.size());
  if (w.empty()) return w;
  const double m = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(m)) throw std::invalid_argument("weights are not finite");
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_weights[i] - m);
    total += w[i];
  }
  for (double& t : w) t /= total;
  return w;
}

double effective_sample_size(std::span<const double> log_weights) {
  if (log_weights.empty()) return 0.0;
  const std::vector<double> w = normalized_weights(log_weights);
  double sq = 0.0;
  for (double t : w) sq += t * t;
  return 1.0 / sq;
}

namespace {

std::vector<double> weights_or_uniform(std::size_t n, std::span<const double> log_weights) {
  if (log_weights.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (log_weights.size() != n)
    throw std::invalid_argument("weights and values differ in length");
  return normalized_weights(log_weights);
}

}  // namespace

Estimate weighted_mean(std::span<const double> values, std::span<const double> log_weights) {
  if (values.empty()) throw std::invalid_argument("weighted_mean: empty input");
  const std::vector<double> w = weights_or_uniform(values.size(), log_weights);
  Estimate est;
  double sq = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    est.value += w[i] * values[i];
    sq += w[i] * w[i];
  }
  double var_acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - est.value;
    var_acc += w[i] * w[i] * d * d;
  }
  est.stderr_ = std::sqrt(var_acc);
  est.n_effective = 1.0 / sq;
  return est;
}

Estimate weighted_variance(std::span<const double> values,
                           std::span<const double> log_weights) {
  if (values.empty()) throw std::invalid_argument("weighted_variance: empty input");
  const std::vector<double> w = weights_or_uniform(values.size(), log_weights);
  double mu = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mu += w[i] * values[i];
    sq += w[i] * w[i];
  }
  Estimate est;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mu;
    est.value += w[i] * d * d;
  }
  double se_acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mu;
    const double phi = d * d - est.value;
    se_acc += w[i] * w[i] * phi * phi;
  }
  est.stderr_ = std::sqrt(se_acc);
  est.n_effective = 1.0 / sq;
  return est;
}

Estimate weighted_covariance(std::span<const double> a, std::span<const double> b,
                             std::span<const double> log_weights) {
  if (a.empty()) throw std::invalid_argument("weighted_covariance: empty input");
  if (a.size() != b.size())
    throw std::invalid_argument("weighted_covariance: length mismatch");
  const std::vector<double> w = weights_or_uniform(a.size(), log_weights);
  double mu_a = 0.0, mu_b = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mu_a += w[i] * a[i];
    mu_b += w[i] * b[i];
    sq += w[i] * w[i];
  }
  Estimate est;
  for (std::size_t i = 0; i < a.size(); ++i) est.value += w[i] * (a[i] - mu_a) * (b[i] - mu_b);
  double se_acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double phi = (a[i] - mu_a) * (b[i] - mu_b) - est.value;
    se_acc += w[i] * w[i] * phi * phi;
  }
  est.stderr_ = std::sqrt(se_acc);
  est.n_effective = 1.0 / sq;
  return est;
}

Histogram weighted_histogram(std::span<const double> values,
                             std::span<const double> log_weights, double lo, double hi,
                             int n_bins) {
  if (values.empty()) throw std::invalid_argument("weighted_histogram: empty input");
  if (!(hi > lo)) throw std::invalid_argument("weighted_histogram: need hi > lo");
  if (n_bins < 1) throw std::invalid_argument("weighted_histogram: need n_bins >= 1");
  const std::vector<double> w = weights_or_uniform(values.size(), log_weights);
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.mass.assign(n_bins, 0.0);
  const double scale = n_bins / (hi - lo);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < lo) {
      h.under_mass += w[i];
    } else if (values[i] >= hi) {
      h.over_mass += w[i];
    } else {
      const int b = std::min(n_bins - 1, static_cast<int>((values[i] - lo) * scale));
      h.mass[b] += w[i];
    }
  }
  return h;
}

}  // namespace asepkpz
