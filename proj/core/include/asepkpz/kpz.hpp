#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asepkpz/rng.hpp"

namespace asepkpz {

// Path on M+1 uniform grid points of [0, L]. log_weight is the importance
// weight; exact (unweighted) samples carry 0.
struct PathSample {
  double L = 0.0;
  std::vector<double> values;
  double log_weight = 0.0;

  int grid_m() const { return static_cast<int>(values.size()) - 1; }
  double dx() const { return L / grid_m(); }
};

// Ensemble summarized at probe locations; full paths are not retained.
// values[k] holds sample k at each probe. log_s1 stores log of the
// exponential functional int_0^L exp(-2 X) dx per sample, which the zero
// mode construction needs downstream.
struct WeightedEnsemble {
  double L = 0.0;
  double u = 0.0, v = 0.0;
  std::vector<double> probes;               // x locations, grid-aligned
  std::vector<std::vector<double>> values;  // [sample][probe]
  std::vector<double> aux;                  // [sample * probes + j]: second field (W/sqrt2) in H mode
  std::vector<double> log_weight;
  std::vector<double> log_s1;
  bool low_ess_warning = false;

  std::size_t count() const { return values.size(); }
  double ess() const;
};

// Brownian path with Var(B(x)) = sigma2 * x, B(0) = 0.
PathSample sample_brownian(int grid_m, double L, double sigma2, RandomStream& rng);

// log of the reweighting factor: -u log S1 - v log S2 with
// S1 = int exp(-2X) dx, S2 = int exp(2X(L) - 2X) dx, both by trapezoid
// quadrature accumulated in log space. Optionally reports log S1.
double rn_log_weight_X(const PathSample& path, double u, double v,
                       double* log_s1_out = nullptr);

// N reweighted Brownian proposals (sigma2 = 1/2), recorded at the probes.
// u = v = 0 is allowed as the trivial-weight mode; otherwise u + v > 0.
WeightedEnsemble sample_X_ensemble(double u, double v, double L, int grid_m,
                                   std::int64_t n_samples, RandomStream& rng,
                                   std::span<const double> probes);

// H = W / sqrt(2) + X with W an independent sigma2 = 1 path; the weight is
// the X weight alone. values hold H at the probes, aux holds W / sqrt(2).
WeightedEnsemble sample_H_ensemble(double u, double v, double L, int grid_m,
                                   std::int64_t n_samples, RandomStream& rng,
                                   std::span<const double> probes);

// Zero mode: draws G ~ Gamma(u + v, 1) and returns
// U(0) = (log S1 - log G) / 2, so exp(-2 U(0)) S1 = G exactly.
double resample_zero_mode_offset(double log_s1, double u, double v, RandomStream& rng);

// Path form: U(x) = U(0) + X(x); weight carried over from the X sample.
PathSample resample_zero_mode(const PathSample& x_path, double u, double v,
                              RandomStream& rng);

// One row of a discrete-to-continuum comparison. source is "discrete"
// (one row per epsilon), "extrapolated" (linear-in-epsilon intercept), or
// "continuum" (the direct sampler).
struct ConvergenceRow {
  std::string observable;
  std::string source;
  double epsilon = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double n_effective = 0.0;
};

// Runs the walk sampler at each epsilon and the continuum sampler once,
// evaluating the named observables. Supported names: mean_H_end, var_H_end,
// var_V_end, mean_U_end, var_U_end, mean_X_end, var_X_end.
std::vector<ConvergenceRow> convergence_study(double u, double v, double L,
                                              std::span<const double> epsilons,
                                              std::span<const std::string> observables,
                                              std::int64_t n_samples, int grid_m,
                                              RandomStream& rng);

}  // namespace asepkpz
