#pragma once

#include <span>
#include <vector>

namespace asepkpz {

// Point estimate with a delta-method standard error. n_effective is the
// importance-sampling effective count (sum w)^2 / sum w^2; it equals the
// sample count for uniform weights.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double n_effective = 0.0;
};

// Self-normalized weights from log weights (empty input -> empty output;
// an empty weight list elsewhere means uniform).
std::vector<double> normalized_weights(std::span<const double> log_weights);

double effective_sample_size(std::span<const double> log_weights);

// Weighted estimators. log_weights may be empty for the unweighted case;
// otherwise sizes must match. Standard errors come from the influence
// function of the self-normalized estimator.
Estimate weighted_mean(std::span<const double> values, std::span<const double> log_weights);
Estimate weighted_variance(std::span<const double> values, std::span<const double> log_weights);
Estimate weighted_covariance(std::span<const double> a, std::span<const double> b,
                             std::span<const double> log_weights);

struct Histogram {
  double lo = 0.0, hi = 0.0;
  std::vector<double> mass;  // normalized weight per bin
  double under_mass = 0.0;   // weight below lo
  double over_mass = 0.0;    // weight at or above hi
};
Histogram weighted_histogram(std::span<const double> values,
                             std::span<const double> log_weights, double lo, double hi,
                             int n_bins);

}  // namespace asepkpz
